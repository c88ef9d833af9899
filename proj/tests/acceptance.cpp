// Acceptance gate: one PASS/FAIL line per criterion, exit 0 only if all pass.
//
//   1  operator-swap identities, both engineered models, N = 2..8
//   2  perfect transfer across the medium-robustness matrix
//   3  closed-form oracles vs dense evolution (pure and mixed)
//   4  purity law winner + coherence independence
//   5  entanglement structure of the output state
//   6  free-fermion engine: dense cross-check, N=100 estimate, N<=200 transfer
//   7  CLI determinism (byte-identical repeated outputs)

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qst/analysis.hpp"
#include "qst/cli.hpp"
#include "qst/fermion_engine.hpp"

using namespace qst;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %d [%s]: %s (%s)\n", criterion, name,
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

ChainSpec make_spec(ChainModel model, int n) {
    ChainSpec s;
    s.model = model;
    s.n_sites = n;
    if (model == ChainModel::XXHomogeneous) s.end_coupling_ratio = 0.7;
    return s;
}

Eigen::Vector2cd random_ket(std::mt19937_64& eng) {
    GaussianStream g(eng());
    Eigen::Vector2cd k(g.next_complex(), g.next_complex());
    return k.normalized();
}

// --------------------------------------------------------------- criterion 1

void criterion_swap_identities() {
    double worst = 0.0;
    int checks = 0;
    for (auto model : {ChainModel::IsingEngineered, ChainModel::XXEngineered}) {
        for (int n = 2; n <= 8; ++n) {
            for (const auto& rep : check_swap_identities(make_spec(model, n))) {
                worst = std::max(worst, rep.residual);
                ++checks;
            }
        }
    }
    std::ostringstream d;
    d << checks << " identities, max residual " << worst;
    report(1, "swap identities", checks > 0 && worst < 1e-8, d.str());
}

// --------------------------------------------------------------- criterion 2

void criterion_medium_robustness() {
    double min_f = 1.0;
    int runs = 0;
    MediumSweepOptions opts;
    opts.pure_inputs_per_cell = 20;
    opts.mixed_inputs_per_cell = 5;
    opts.seed = 20240817;
    for (auto model : {ChainModel::IsingEngineered, ChainModel::XXEngineered}) {
        for (int n = 3; n <= 8; ++n) {
            const auto media = default_medium_variants(n - 2, opts.seed ^ n);
            for (const auto& cell : medium_sweep(model, {n}, media, opts)) {
                min_f = std::min(min_f, cell.min_fidelity);
                runs += cell.runs;
            }
        }
    }
    std::ostringstream d;
    d << runs << " runs, min fidelity deficit " << 1.0 - min_f;
    report(2, "medium robustness", runs >= 2 * 6 * 8 * 50 && 1.0 - min_f < 1e-9,
           d.str());
}

// --------------------------------------------------------------- criterion 3

void criterion_closed_forms() {
    std::mt19937_64 eng(314159);
    std::uniform_int_distribution<int> bit(0, 1);
    double worst_infidelity = 0.0;
    for (int n = 3; n <= 8; ++n) {
        const ChainSpec spec = make_spec(ChainModel::IsingEngineered, n);
        const ProtocolEngine engine(spec);
        for (int trial = 0; trial < 20; ++trial) {
            std::string bits;
            for (int k = 0; k < n - 2; ++k) bits += bit(eng) ? '1' : '0';
            const Eigen::Vector2cd psi = random_ket(eng);

            Vector full = Vector::Zero(std::int64_t(1) << n);
            std::uint64_t idx = 0;
            for (char c : bits) idx = (idx << 1) | (c == '1');
            for (int a = 0; a < 2; ++a) {
                full((std::uint64_t(a) << (n - 1)) | (idx << 1)) = psi(a);
            }
            const StateVector evolved =
                evolve(engine.prop(), StateVector(n, std::move(full)));
            const StateVector closed = engine.closed_form_pure(psi, bits);
            const Complex ov =
                (closed.amplitudes().adjoint() * evolved.amplitudes())(0);
            worst_infidelity = std::max(worst_infidelity, 1.0 - std::norm(ov));
        }
    }

    double worst_dist = 0.0;
    auto mixed_cases = [&](ChainModel model, const std::vector<int>& ns) {
        for (int n : ns) {
            const ChainSpec spec = make_spec(model, n);
            const ProtocolEngine engine(spec);
            for (int trial = 0; trial < 10; ++trial) {
                const Eigen::Vector2cd psi = random_ket(eng);
                const DensityMatrix medium =
                    random_mixed_state(n - 2, 1 << (n - 2), eng());
                const Eigen::Vector2cd knob = n_projection_ket(spec, +1);
                const Matrix full =
                    kron(kron(Matrix(psi * psi.adjoint()), medium.matrix()),
                         Matrix(knob * knob.adjoint()));
                const DensityMatrix evolved =
                    evolve(engine.prop(), DensityMatrix(n, full));
                const DensityMatrix closed = engine.closed_form_mixed(
                    SingleQubitState::from_ket(psi), medium.matrix());
                worst_dist = std::max(
                    worst_dist, trace_distance(closed.matrix(), evolved.matrix()));
            }
        }
    };
    mixed_cases(ChainModel::IsingEngineered, {4, 5, 6});
    mixed_cases(ChainModel::XXEngineered, {4, 5});

    std::ostringstream d;
    d << "pure max infidelity " << worst_infidelity << ", mixed max trace distance "
      << worst_dist;
    report(3, "closed-form oracles", worst_infidelity < 1e-9 && worst_dist < 1e-9,
           d.str());
}

// --------------------------------------------------------------- criterion 4

void criterion_purity_law() {
    const ProtocolEngine engine(make_spec(ChainModel::IsingEngineered, 4));
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);

    double winner_dev = 0.0;   // squared candidate, across all theta
    double loser_dev = 0.0;    // linear candidate, best discriminating theta
    bool consistent = true;
    for (int k = 0; k < 9; ++k) {
        const double theta = (std::numbers::pi / 2.0) * k / 8.0;
        const Eigen::Vector2cd psi(std::cos(theta), std::sin(theta));
        const P00SweepReport rep = p00_sweep(engine, psi, grid);
        winner_dev = std::max(winner_dev, rep.max_dev_b);
        loser_dev = std::max(loser_dev, rep.max_dev_a);
        if (rep.winner == "linear") consistent = false;
    }

    // Coherence independence: 5 gamma values at fixed p00.
    const double p00 = 0.6, theta = 0.5;
    const Eigen::Vector2cd psi(std::cos(theta), std::sin(theta));
    const double gmax = std::sqrt(p00 * (1.0 - p00));
    double fmin = 2.0, fmax = -1.0;
    for (int k = 0; k < 5; ++k) {
        Eigen::Matrix2cd rho_n;
        rho_n << p00, gmax * k / 4.0, gmax * k / 4.0, 1.0 - p00;
        const UnprojectedRun run = engine.run_unprojected_n(
            psi, MediumSpec::maximally_mixed(), SingleQubitState(rho_n),
            OutcomeMode::force(+1));
        fmin = std::min(fmin, run.fidelity);
        fmax = std::max(fmax, run.fidelity);
    }
    const double gamma_spread = fmax - fmin;

    std::ostringstream d;
    d << "squared-form dev " << winner_dev << ", linear-form dev " << loser_dev
      << ", gamma spread " << gamma_spread;
    report(4, "purity law",
           consistent && winner_dev < 1e-9 && loser_dev > 1e-3 &&
               gamma_spread < 1e-10,
           d.str());
}

// --------------------------------------------------------------- criterion 5

void criterion_entanglement() {
    // The entropy-vs-<X> law is a statement about the output-carrying end of
    // the chain; at N = 2 both ends coincide with it (Schmidt symmetry), so
    // the spin-1 clauses are evaluated there, and the same law is verified on
    // the transfer site for N = 3..8.
    const ProtocolEngine two(make_spec(ChainModel::IsingEngineered, 2));
    auto spin1_entropy = [&](const Eigen::Vector2cd& psi) {
        const StateVector out = two.closed_form_pure(psi, "");
        return entropy(partial_trace(DensityMatrix::from_state(out), {1}));
    };
    const double s_x0 = spin1_entropy(Eigen::Vector2cd(1, 0));  // <X> = 0
    const double s_xp = spin1_entropy(
        Eigen::Vector2cd(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)));  // <X> = +1
    const double s_xm = spin1_entropy(
        Eigen::Vector2cd(1 / std::sqrt(2.0), -1 / std::sqrt(2.0)));  // <X> = -1
    bool pass = std::abs(s_x0 - 1.0) < 1e-9 && std::abs(s_xp) < 1e-9 &&
                std::abs(s_xm) < 1e-9;

    double law_dev = 0.0;
    for (int n = 3; n <= 8; ++n) {
        const ProtocolEngine engine(make_spec(ChainModel::IsingEngineered, n));
        for (double theta : {0.0, 0.4, std::numbers::pi / 4.0, 1.1}) {
            const Eigen::Vector2cd psi(std::cos(theta), std::sin(theta));
            const EntanglementReport rep =
                entanglement_report(engine, psi, std::string(n - 2, '0'));
            law_dev = std::max(
                law_dev, std::abs(rep.knob_entropy -
                                  binary_entropy((1.0 + rep.x_expectation) / 2.0)));
        }
    }
    pass = pass && law_dev < 1e-9;

    // |+->_j inserted at medium site j isolates site N-j+1.
    double isolation = 0.0;
    for (int n : {5, 6}) {
        const ProtocolEngine engine(make_spec(ChainModel::IsingEngineered, n));
        const Eigen::Vector2cd psi(0.6, 0.8);
        for (int j = 2; j <= n - 1; ++j) {
            for (int sign : {+1, -1}) {
                Matrix medium = Matrix::Identity(1, 1);
                for (int s = 2; s <= n - 1; ++s) {
                    Eigen::Matrix2cd site;
                    if (s == j) {
                        site << 0.5, 0.5 * sign, 0.5 * sign, 0.5;
                    } else {
                        site << 1, 0, 0, 0;
                    }
                    medium = kron(medium, site);
                }
                const DensityMatrix out = engine.closed_form_mixed(
                    SingleQubitState::from_ket(psi), medium);
                isolation = std::max(
                    isolation, entropy(partial_trace(out, {n - j + 1})));
            }
        }
    }
    pass = pass && isolation < 1e-9;

    std::ostringstream d;
    d << "N=2 entropies (1," << s_xp << "," << s_xm << "), knob-law dev " << law_dev
      << ", isolation entropy " << isolation;
    report(5, "entanglement structure", pass, d.str());
}

// --------------------------------------------------------------- criterion 6

void criterion_fermion_engine() {
    std::mt19937_64 eng(271828);
    std::uniform_real_distribution<double> tdist(0.0, 3.0);
    double cross_dev = 0.0;
    for (int n = 2; n <= 8; ++n) {
        for (const ChainSpec& spec :
             {make_spec(ChainModel::XXEngineered, n),
              make_spec(ChainModel::XXHomogeneous, n)}) {
            const FermionPropagator f(spec);
            for (int trial = 0; trial < 20; ++trial) {
                const double t = tdist(eng);
                const Propagator u = propagator(spec, t);
                const Complex dense =
                    u.matrix(1, std::uint64_t(1) << (n - 1));
                cross_dev = std::max(cross_dev,
                                     std::abs(f.transfer_amplitude(t) - dense));
            }
        }
    }

    const TransferOptimum opt = optimize_transfer_time(
        make_spec(ChainModel::XXHomogeneous, 100), 400.0, 20001);
    const double estimate = average_fidelity_estimate(opt.abs_f_max);

    double engineered_deficit = 0.0;
    for (int n = 2; n <= 200; ++n) {
        const ChainSpec spec = make_spec(ChainModel::XXEngineered, n);
        engineered_deficit = std::max(
            engineered_deficit,
            1.0 - std::abs(transfer_amplitude(spec, critical_time(spec))));
    }

    std::ostringstream d;
    d << "dense cross-check dev " << cross_dev << ", N=100 estimate " << estimate
      << " at t " << opt.t_opt << ", engineered deficit (N<=200) "
      << engineered_deficit;
    report(6, "fermion engine",
           cross_dev < 1e-8 && estimate >= 0.87 && engineered_deficit < 1e-9,
           d.str());
}

// --------------------------------------------------------------- criterion 7

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void criterion_determinism() {
    using nlohmann::json;
    const fs::path root =
        fs::temp_directory_path() / "qst_acceptance_determinism";
    fs::remove_all(root);
    bool pass = true;
    std::ostringstream d;

    struct Case {
        const char* command;
        json config;
        const char* artifact;
    };
    std::vector<Case> cases = {
        {"run",
         json{{"chain", {{"model", "xx_engineered"}, {"n_sites", 5}}},
              {"input", {{"theta", 0.8}, {"phi", 2.1}}},
              {"medium", {{"variant", "random_mixed"}, {"seed", 5}, {"rank", 3}}},
              {"seed", 99}},
         "run.json"},
        {"verify-identities",
         json{{"chain", {{"model", "ising_engineered"}, {"n_sites", 6}}}},
         "identities.csv"},
        {"p00-sweep",
         json{{"chain", {{"model", "ising_engineered"}, {"n_sites", 4}}},
              {"theta_points", 3},
              {"p00_points", 5}},
         "p00_sweep.csv"},
        {"homogeneous",
         json{{"chain",
               {{"model", "xx_homogeneous"},
                {"n_sites", 12},
                {"end_coupling_ratio", 0.7}}},
              {"t_max", 30.0},
              {"grid_points", 501}},
         "transfer_curve.csv"},
    };
    for (std::size_t k = 0; k < cases.size(); ++k) {
        std::string first, second;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path dir = root / (std::to_string(k) + (rep ? "b" : "a"));
            json config = cases[k].config;
            config["output"] = {{"dir", dir.string()}};
            if (cli::run_command(cases[k].command, config) != cli::kExitOk) {
                pass = false;
                d << cases[k].command << " failed; ";
                break;
            }
            (rep ? second : first) = slurp(dir / cases[k].artifact);
        }
        if (first.empty() || first != second) {
            pass = false;
            d << cases[k].command << " not byte-identical; ";
        }
    }
    fs::remove_all(root);
    if (pass) d << cases.size() << " commands byte-identical on repeat";
    report(7, "determinism", pass, d.str());
}

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    criterion_swap_identities();
    criterion_medium_robustness();
    criterion_closed_forms();
    criterion_purity_law();
    criterion_entanglement();
    criterion_fermion_engine();
    criterion_determinism();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%s: %d/7 criteria passed in %.1f s\n",
                g_failures == 0 ? "ALL PASS" : "FAILURES", 7 - g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}
