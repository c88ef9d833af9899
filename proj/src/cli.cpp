#include "qst/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

namespace qst::cli {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

ChainSpec parse_chain(const json& config) {
    if (!config.contains("chain")) throw ConfigError("config: missing 'chain'");
    const json& c = config.at("chain");
    require_keys(c, "chain", {"model", "n_sites", "j_scale", "end_coupling_ratio"});
    ChainSpec spec;
    spec.model = chain_model_from_name(c.at("model").get<std::string>());
    spec.n_sites = c.at("n_sites").get<int>();
    spec.j_scale = c.value("j_scale", 1.0);
    if (c.contains("end_coupling_ratio")) {
        spec.end_coupling_ratio = c.at("end_coupling_ratio").get<double>();
    }
    spec.validate();
    return spec;
}

SingleQubitState parse_input_state(const json& config) {
    if (!config.contains("input")) throw ConfigError("config: missing 'input'");
    const json& in = config.at("input");
    require_keys(in, "input", {"theta", "phi", "matrix"});
    if (in.contains("matrix")) {
        const auto rows = in.at("matrix");
        if (!rows.is_array() || rows.size() != 2) {
            throw ConfigError("input.matrix: expected 2x2 [re, im] entries");
        }
        Eigen::Matrix2cd m;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const auto& e = rows.at(r).at(c);
                m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        }
        return SingleQubitState(m);
    }
    // Bloch angles: cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
    const double theta = in.value("theta", 0.0);
    const double phi = in.value("phi", 0.0);
    Eigen::Vector2cd k;
    k << std::cos(theta / 2.0),
        std::exp(Complex(0.0, phi)) * std::sin(theta / 2.0);
    return SingleQubitState::from_ket(k);
}

MediumSpec parse_medium(const json& config) {
    if (!config.contains("medium")) throw ConfigError("config: missing 'medium'");
    const json& m = config.at("medium");
    require_keys(m, "medium", {"variant", "bits", "signs", "beta", "seed", "rank"});
    const std::string variant = m.at("variant").get<std::string>();
    if (variant == "product_z") return MediumSpec::product_z(m.at("bits").get<std::string>());
    if (variant == "x_eigenstates") {
        return MediumSpec::x_eigenstates(m.at("signs").get<std::vector<int>>());
    }
    if (variant == "thermal") return MediumSpec::thermal(m.at("beta").get<double>());
    if (variant == "maximally_mixed") return MediumSpec::maximally_mixed();
    if (variant == "random_pure") {
        return MediumSpec::random_pure(m.at("seed").get<std::uint64_t>());
    }
    if (variant == "random_mixed") {
        return MediumSpec::random_mixed(m.at("seed").get<std::uint64_t>(),
                                        m.value("rank", 1));
    }
    throw ConfigError("medium.variant: unknown variant '" + variant + "'");
}

OutcomeMode parse_outcome(const json& config, const std::string& key,
                          std::uint64_t seed) {
    const std::string v = config.value(key, std::string("sample"));
    if (v == "sample") return OutcomeMode::sample(seed);
    if (v == "+1") return OutcomeMode::force(+1);
    if (v == "-1") return OutcomeMode::force(-1);
    throw ConfigError(key + ": expected sample, +1 or -1");
}

struct CsvWriter {
    std::string text;

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text += ',';
            text += cells[i];
        }
        text += '\n';
    }
};

json run_to_json(const ProtocolRun& run) {
    auto mat = [](const Eigen::Matrix2cd& m) {
        json rows = json::array();
        for (int r = 0; r < 2; ++r) {
            json row = json::array();
            for (int c = 0; c < 2; ++c) {
                row.push_back({m(r, c).real(), m(r, c).imag()});
            }
            rows.push_back(row);
        }
        return rows;
    };
    return json{
        {"model", chain_model_name(run.spec.model)},
        {"n_sites", run.spec.n_sites},
        {"j_scale", run.spec.j_scale},
        {"evolution_time", run.evolution_time},
        {"input_matrix", mat(run.input.matrix())},
        {"medium", run.medium_label},
        {"n_projection_outcome", run.n_projection_outcome},
        {"first_spin_outcome", run.first_spin_outcome},
        {"outcome_product", run.outcome_product},
        {"first_spin_probability", run.first_spin_probability},
        {"correction_applied", run.correction_applied},
        {"output_matrix", mat(run.output.matrix())},
        {"fidelity", run.fidelity},
        {"seed", run.seed},
        {"heisenberg_convention", kHeisenbergConvention},
        {"library_version", "1.0.0"},
    };
}

std::filesystem::path out_path(const json& config, const std::string& key,
                               const std::string& fallback) {
    std::string name = fallback;
    if (config.contains("output") && config.at("output").contains(key)) {
        name = config.at("output").at(key).get<std::string>();
    }
    std::filesystem::path p(name);
    if (p.is_absolute()) return p;
    return output_dir(config) / p;
}

void check_output_keys(const json& config) {
    if (config.contains("output")) {
        require_keys(config.at("output"), "output", {"dir", "csv", "json"});
    }
}

}  // namespace

void apply_override(json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override must look like path.to.key=value");
    }
    std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    json* node = &config;
    std::size_t start = 0;
    for (auto dot = path.find('.'); dot != std::string::npos;
         start = dot + 1, dot = path.find('.', start)) {
        node = &(*node)[path.substr(start, dot - start)];
    }
    json parsed = json::parse(value, nullptr, false);
    (*node)[path.substr(start)] = parsed.is_discarded() ? json(value) : parsed;
}

std::filesystem::path output_dir(const json& config) {
    if (config.contains("output") && config.at("output").contains("dir")) {
        return config.at("output").at("dir").get<std::string>();
    }
    if (const char* env = std::getenv("QST_OUTPUT_DIR")) return env;
    return ".";
}

void atomic_write(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path().empty()
                                            ? "."
                                            : path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f << text;
    }
    std::filesystem::rename(tmp, path);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_verify_identities(const json& config) {
    require_keys(config, "config", {"chain", "threshold", "output", "seed"});
    check_output_keys(config);
    const ChainSpec spec = parse_chain(config);
    const double threshold = config.value("threshold", 1e-8);

    const auto reports = check_swap_identities(spec);
    CsvWriter csv;
    csv.row({"model", "n_sites", "site", "pair", "target", "residual", "convention"});
    json failures = json::array();
    for (const auto& r : reports) {
        csv.row({chain_model_name(r.model), std::to_string(r.n_sites),
                 std::to_string(r.site), r.pair_label, r.target_label,
                 format_double(r.residual), r.convention});
        if (!(r.residual < threshold)) {
            failures.push_back({{"n_sites", r.n_sites},
                                {"site", r.site},
                                {"pair", r.pair_label},
                                {"residual", r.residual}});
        }
    }
    atomic_write(out_path(config, "csv", "identities.csv"), csv.text);
    if (!failures.empty()) {
        std::cout << json{{"status", "fail"}, {"failures", failures}}.dump() << "\n";
        return kExitNumericalError;
    }
    std::cout << json{{"status", "ok"}, {"checks", reports.size()}}.dump() << "\n";
    return kExitOk;
}

int cmd_run(const json& config) {
    require_keys(config, "config",
                 {"chain", "input", "medium", "n_outcome", "m1_outcome", "seed",
                  "evolution_time", "output"});
    check_output_keys(config);
    const ChainSpec spec = parse_chain(config);
    const std::uint64_t seed = config.value("seed", 0ULL);
    std::optional<double> time;
    if (config.contains("evolution_time")) {
        time = config.at("evolution_time").get<double>();
    }
    const ProtocolEngine engine(spec, time);
    const ProtocolRun run = engine.run(
        parse_input_state(config), parse_medium(config),
        parse_outcome(config, "n_outcome", seed),
        parse_outcome(config, "m1_outcome", seed + 1));
    const json doc = run_to_json(run);
    atomic_write(out_path(config, "json", "run.json"), doc.dump(2) + "\n");
    std::cout << json{{"fidelity", run.fidelity},
                      {"outcome_product", run.outcome_product},
                      {"correction", run.correction_applied}}
                     .dump()
              << "\n";
    return kExitOk;
}

int cmd_sweep_medium(const json& config) {
    require_keys(config, "config",
                 {"chain", "n_range", "seed", "pure_inputs", "mixed_inputs", "output"});
    check_output_keys(config);
    if (!config.contains("chain")) throw ConfigError("config: missing 'chain'");
    require_keys(config.at("chain"), "chain",
                 {"model", "n_sites", "j_scale", "end_coupling_ratio"});
    const ChainModel model =
        chain_model_from_name(config.at("chain").at("model").get<std::string>());
    std::vector<int> n_range = config.value("n_range", std::vector<int>{3, 4, 5, 6, 7, 8});
    MediumSweepOptions opts;
    opts.seed = config.value("seed", 0ULL);
    opts.pure_inputs_per_cell = config.value("pure_inputs", 20);
    opts.mixed_inputs_per_cell = config.value("mixed_inputs", 5);

    CsvWriter csv;
    csv.row({"model", "n_sites", "medium", "runs", "min_fidelity", "mean_fidelity"});
    double min_overall = 1.0;
    for (int n : n_range) {
        const auto media = default_medium_variants(n - 2, opts.seed ^ n);
        for (const auto& cell : medium_sweep(model, {n}, media, opts)) {
            csv.row({chain_model_name(cell.model), std::to_string(cell.n_sites),
                     cell.medium_label, std::to_string(cell.runs),
                     format_double(cell.min_fidelity),
                     format_double(cell.mean_fidelity)});
            min_overall = std::min(min_overall, cell.min_fidelity);
        }
    }
    atomic_write(out_path(config, "csv", "medium_sweep.csv"), csv.text);
    std::cout << json{{"min_fidelity", min_overall}}.dump() << "\n";
    return kExitOk;
}

int cmd_p00_sweep(const json& config) {
    require_keys(config, "config",
                 {"chain", "theta_points", "p00_points", "output", "seed"});
    check_output_keys(config);
    const ChainSpec spec = parse_chain(config);
    const int theta_points = config.value("theta_points", 9);
    const int p00_points = config.value("p00_points", 11);
    if (theta_points < 1 || p00_points < 2) {
        throw ConfigError("p00_sweep: need theta_points >= 1, p00_points >= 2");
    }
    std::vector<double> grid;
    for (int k = 0; k < p00_points; ++k) {
        grid.push_back(double(k) / (p00_points - 1));
    }
    const ProtocolEngine engine(spec);
    CsvWriter csv;
    csv.row({"theta", "x_expectation", "p00", "simulated", "candidate_linear",
             "candidate_squared", "winner", "max_dev_linear", "max_dev_squared"});
    std::string winner = "indistinguishable";
    for (int k = 0; k < theta_points; ++k) {
        // psi = cos(theta)|0> + sin(theta)|1>, theta in [0, pi/2].
        const double theta =
            theta_points == 1 ? 0.0 : (std::numbers::pi / 2.0) * k / (theta_points - 1);
        Eigen::Vector2cd psi(std::cos(theta), std::sin(theta));
        const P00SweepReport rep = p00_sweep(engine, psi, grid);
        for (std::size_t i = 0; i < rep.p00_grid.size(); ++i) {
            csv.row({format_double(theta), format_double(rep.x_expectation),
                     format_double(rep.p00_grid[i]), format_double(rep.simulated[i]),
                     format_double(rep.candidate_a[i]),
                     format_double(rep.candidate_b[i]), rep.winner,
                     format_double(rep.max_dev_a), format_double(rep.max_dev_b)});
        }
        if (rep.winner != "indistinguishable") winner = rep.winner;
    }
    atomic_write(out_path(config, "csv", "p00_sweep.csv"), csv.text);
    std::cout << json{{"winner", winner}}.dump() << "\n";
    return kExitOk;
}

int cmd_homogeneous(const json& config) {
    require_keys(config, "config",
                 {"chain", "t_max", "grid_points", "output", "seed"});
    check_output_keys(config);
    const ChainSpec spec = parse_chain(config);
    const double t_max = config.value("t_max", 400.0 / spec.j_scale);
    const int grid_points = config.value("grid_points", 20001);
    const TransferOptimum opt = optimize_transfer_time(spec, t_max, grid_points);

    CsvWriter csv;
    csv.row({"t", "abs_f", "avg_fidelity_estimate"});
    for (std::size_t i = 0; i < opt.curve.times.size(); ++i) {
        csv.row({format_double(opt.curve.times[i]),
                 format_double(opt.curve.amplitudes[i]),
                 format_double(opt.curve.avg_fidelities[i])});
    }
    atomic_write(out_path(config, "csv", "transfer_curve.csv"), csv.text);
    const json summary{
        {"model", chain_model_name(spec.model)},
        {"n_sites", spec.n_sites},
        {"t_opt", opt.t_opt},
        {"abs_f_max", opt.abs_f_max},
        {"avg_fidelity_estimate_max", average_fidelity_estimate(opt.abs_f_max)},
        {"t_max", t_max},
        {"grid_points", grid_points},
    };
    atomic_write(out_path(config, "json", "homogeneous_summary.json"),
                 summary.dump(2) + "\n");
    std::cout << summary.dump() << "\n";
    return kExitOk;
}

int cmd_entangle(const json& config) {
    require_keys(config, "config", {"chain", "input", "medium", "output", "seed"});
    check_output_keys(config);
    const ChainSpec spec = parse_chain(config);
    const SingleQubitState input = parse_input_state(config);
    const MediumSpec medium = parse_medium(config);
    if (medium.variant != MediumSpec::Variant::ProductZ) {
        throw ConfigError("entangle: medium must be product_z");
    }
    const ProtocolEngine engine(spec);
    const EntanglementReport rep =
        entanglement_report(engine, input.principal_ket(), medium.bits);
    const json doc{
        {"psi", rep.psi_label},
        {"x_expectation", rep.x_expectation},
        {"cut_entropies", rep.cut_entropies},
        {"site_entropies", rep.site_entropies},
        {"spin1_entropy", rep.spin1_entropy},
        {"knob_entropy", rep.knob_entropy},
        {"ghz_fraction_proxy", rep.ghz_fraction_proxy},
    };
    atomic_write(out_path(config, "json", "entanglement.json"), doc.dump(2) + "\n");
    std::cout << doc.dump() << "\n";
    return kExitOk;
}

int cmd_triplet_check(const json& config) {
    require_keys(config, "config", {"chain", "t", "triplet", "output", "seed"});
    check_output_keys(config);
    const ChainSpec spec = parse_chain(config);
    const double t = config.contains("t") ? config.at("t").get<double>()
                                          : critical_time(spec);
    TripletSpec triplet = spec.model == ChainModel::IsingEngineered
                              ? TripletSpec::ising_default()
                              : TripletSpec::xx_even_default();
    if (config.contains("triplet")) {
        const json& tj = config.at("triplet");
        require_keys(tj, "triplet", {"b", "c", "d", "exponents"});
        auto single = [](const std::string& name) -> Eigen::Matrix2cd {
            if (name == "I") return Eigen::Matrix2cd::Identity();
            if (name == "X") return pauli_matrix(PauliLetter::X);
            if (name == "Y") return pauli_matrix(PauliLetter::Y);
            if (name == "Z") return pauli_matrix(PauliLetter::Z);
            if (name == "T") return t_gate_power(1);
            if (name == "Tdag") return t_gate_power(3);
            if (name == "T2") return t_gate_power(2);
            if (name == "T3") return t_gate_power(3);
            throw ConfigError("triplet: unknown single-qubit operator " + name);
        };
        if (tj.contains("b")) triplet.b = single(tj.at("b").get<std::string>());
        if (tj.contains("c")) triplet.c = single(tj.at("c").get<std::string>());
        if (tj.contains("d")) triplet.d = single(tj.at("d").get<std::string>());
        if (tj.contains("exponents")) {
            const json& ex = tj.at("exponents");
            require_keys(ex, "triplet.exponents", {"x", "y", "z"});
            const char* names[3] = {"x", "y", "z"};
            for (int i = 0; i < 3; ++i) {
                if (ex.contains(names[i])) {
                    const auto pair = ex.at(names[i]).get<std::vector<int>>();
                    if (pair.size() != 2) {
                        throw ConfigError("triplet.exponents: need [j, k]");
                    }
                    triplet.exponents[i] = {pair[0], pair[1]};
                }
            }
        }
    }
    const auto reports = check_triplet_condition(spec, t, triplet);
    CsvWriter csv;
    csv.row({"op", "site", "residual"});
    double worst = 0.0;
    for (const auto& r : reports) {
        csv.row({std::string(1, r.op), std::to_string(r.site),
                 format_double(r.residual)});
        worst = std::max(worst, r.residual);
    }
    atomic_write(out_path(config, "csv", "triplet_check.csv"), csv.text);
    std::cout << json{{"max_residual", worst}}.dump() << "\n";
    return kExitOk;
}

int run_command(const std::string& command, const json& config) {
    try {
        if (command == "verify-identities") return cmd_verify_identities(config);
        if (command == "run") return cmd_run(config);
        if (command == "sweep-medium") return cmd_sweep_medium(config);
        if (command == "p00-sweep") return cmd_p00_sweep(config);
        if (command == "homogeneous") return cmd_homogeneous(config);
        if (command == "entangle") return cmd_entangle(config);
        if (command == "triplet-check") return cmd_triplet_check(config);
        std::cerr << "unknown command: " << command << "\n";
        return kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumericalError;
    }
}

}  // namespace qst::cli
