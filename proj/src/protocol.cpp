#include "qst/protocol.hpp"

#include <cmath>
#include <numbers>

namespace qst {

namespace {

const Complex kI(0.0, 1.0);

Matrix kron_chain(const Matrix& a, const Matrix& b, const Matrix& c) {
    return kron(kron(a, b), c);
}

Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

Vector bits_to_ket(const std::string& bits) {
    Vector v = Vector::Zero(Eigen::Index{1} << bits.size());
    std::uint64_t idx = 0;
    for (char b : bits) idx = (idx << 1) | (b == '1');
    v(static_cast<Eigen::Index>(idx)) = 1.0;
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// MediumSpec

MediumSpec MediumSpec::product_z(std::string bits) {
    MediumSpec m;
    m.variant = Variant::ProductZ;
    m.bits = std::move(bits);
    return m;
}

MediumSpec MediumSpec::product_states(std::vector<Eigen::Matrix2cd> states) {
    MediumSpec m;
    m.variant = Variant::ProductStates;
    m.states = std::move(states);
    return m;
}

MediumSpec MediumSpec::x_eigenstates(std::vector<int> signs) {
    MediumSpec m;
    m.variant = Variant::XEigenstates;
    m.signs = std::move(signs);
    return m;
}

MediumSpec MediumSpec::thermal(double beta) {
    MediumSpec m;
    m.variant = Variant::Thermal;
    m.beta = beta;
    return m;
}

MediumSpec MediumSpec::maximally_mixed() {
    MediumSpec m;
    m.variant = Variant::MaximallyMixed;
    return m;
}

MediumSpec MediumSpec::random_pure(std::uint64_t seed) {
    MediumSpec m;
    m.variant = Variant::RandomPure;
    m.seed = seed;
    return m;
}

MediumSpec MediumSpec::random_mixed(std::uint64_t seed, int rank) {
    MediumSpec m;
    m.variant = Variant::RandomMixed;
    m.seed = seed;
    m.rank = rank;
    return m;
}

void MediumSpec::validate(int n_medium) const {
    switch (variant) {
        case Variant::ProductZ:
            if (static_cast<int>(bits.size()) != n_medium) {
                throw std::invalid_argument("MediumSpec: bitstring length must be N-2");
            }
            for (char b : bits) {
                if (b != '0' && b != '1') {
                    throw std::invalid_argument("MediumSpec: bits must be 0/1");
                }
            }
            break;
        case Variant::ProductStates:
            if (static_cast<int>(states.size()) != n_medium) {
                throw std::invalid_argument("MediumSpec: need one state per medium site");
            }
            break;
        case Variant::XEigenstates:
            if (static_cast<int>(signs.size()) != n_medium) {
                throw std::invalid_argument("MediumSpec: need one sign per medium site");
            }
            for (int s : signs) {
                if (s != +1 && s != -1) {
                    throw std::invalid_argument("MediumSpec: signs must be +/-1");
                }
            }
            break;
        case Variant::Thermal:
            if (beta < 0.0) throw std::invalid_argument("MediumSpec: beta < 0");
            break;
        case Variant::RandomMixed:
            if (rank < 1) throw std::invalid_argument("MediumSpec: rank < 1");
            break;
        default:
            break;
    }
}

std::string MediumSpec::label() const {
    switch (variant) {
        case Variant::ProductZ: return "product_z:" + bits;
        case Variant::ProductStates: return "product_states";
        case Variant::XEigenstates: {
            std::string s = "x_eigenstates:";
            for (int v : signs) s += v > 0 ? '+' : '-';
            return s;
        }
        case Variant::Thermal: return "thermal:beta=" + std::to_string(beta);
        case Variant::MaximallyMixed: return "maximally_mixed";
        case Variant::RandomPure: return "random_pure:" + std::to_string(seed);
        case Variant::RandomMixed:
            return "random_mixed:" + std::to_string(seed) + ":r" + std::to_string(rank);
    }
    return "?";
}

PreparedMedium prepare_medium(const ChainSpec& spec, const MediumSpec& medium) {
    spec.validate();
    const int nm = spec.n_sites - 2;
    medium.validate(nm);
    PreparedMedium out;
    out.n_medium = nm;
    if (nm == 0) {
        out.pure = Vector::Ones(1);
        out.mixed = Matrix::Ones(1, 1);
        return out;
    }
    const double s = 1.0 / std::numbers::sqrt2;
    switch (medium.variant) {
        case MediumSpec::Variant::ProductZ:
            out.pure = bits_to_ket(medium.bits);
            break;
        case MediumSpec::Variant::XEigenstates: {
            Vector v = Vector::Ones(1);
            for (int sign : medium.signs) {
                Vector q(2);
                q << s, sign > 0 ? s : -s;
                v = kron_vec(v, q);
            }
            out.pure = std::move(v);
            break;
        }
        case MediumSpec::Variant::RandomPure:
            out.pure = random_pure_state(nm, medium.seed).amplitudes();
            break;
        case MediumSpec::Variant::ProductStates: {
            Matrix m = Matrix::Ones(1, 1);
            for (const auto& st : medium.states) {
                m = kron(m, SingleQubitState(st).matrix().cast<Complex>());
            }
            out.mixed = std::move(m);
            return out;
        }
        case MediumSpec::Variant::Thermal: {
            const DensityMatrix full =
                thermal_state(build_hamiltonian(spec), medium.beta);
            std::vector<int> keep;
            for (int site = 2; site < spec.n_sites; ++site) keep.push_back(site);
            out.mixed = partial_trace(full, keep).matrix();
            return out;
        }
        case MediumSpec::Variant::MaximallyMixed: {
            const Eigen::Index dim = Eigen::Index{1} << nm;
            out.mixed = Matrix::Identity(dim, dim) / double(dim);
            return out;
        }
        case MediumSpec::Variant::RandomMixed:
            out.mixed = random_mixed_state(nm, medium.rank, medium.seed).matrix();
            return out;
    }
    out.mixed = *out.pure * out.pure->adjoint();
    return out;
}

Matrix mirror_inversion(const Matrix& medium_rho, int n_medium) {
    const Eigen::Index dim = Eigen::Index{1} << n_medium;
    if (medium_rho.rows() != dim || medium_rho.cols() != dim) {
        throw std::invalid_argument("mirror_inversion: dimension mismatch");
    }
    if (n_medium <= 1) return medium_rho;
    auto rev = [n_medium](std::uint64_t idx) {
        std::uint64_t r = 0;
        for (int b = 0; b < n_medium; ++b) {
            if (idx >> b & 1) r |= std::uint64_t{1} << (n_medium - 1 - b);
        }
        return r;
    };
    Matrix out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            out(rev(r), rev(c)) = medium_rho(r, c);
        }
    }
    return out;
}

std::string mirror_bits(const std::string& bits) {
    return {bits.rbegin(), bits.rend()};
}

// ---------------------------------------------------------------------------
// Conventions

Eigen::Matrix2cd t_gate_power(int n) {
    const Eigen::Matrix2cd t = (Eigen::Matrix2cd() << 1, 0, 0, kI).finished();
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Identity();
    for (int k = 0; k < ((n % 4) + 4) % 4; ++k) out = out * t;
    return out;
}

CorrectionRule correction_rule(const ChainSpec& spec, int outcome_product) {
    if (outcome_product != +1 && outcome_product != -1) {
        throw std::invalid_argument("correction_rule: outcome product must be +/-1");
    }
    if (spec.model == ChainModel::IsingEngineered) {
        if (outcome_product == +1) return {"identity", Eigen::Matrix2cd::Identity()};
        return {"X", pauli_matrix(PauliLetter::X)};
    }
    if (outcome_product == +1) return {"T^N", t_gate_power(spec.n_sites)};
    // The -1 branch picks up an extra Z from the X-basis measurement:
    // Z T^N = T^(N+2). This equals (T^N)^dag only for odd N.
    return {"T^(N+2)", t_gate_power(spec.n_sites + 2)};
}

Eigen::Vector2cd n_projection_ket(const ChainSpec& spec, int outcome) {
    if (spec.model == ChainModel::IsingEngineered) {
        return outcome == +1 ? Eigen::Vector2cd(1, 0) : Eigen::Vector2cd(0, 1);
    }
    const double s = 1.0 / std::numbers::sqrt2;
    const Complex ph = std::exp(kI * (spec.n_sites * std::numbers::pi / 2.0));
    return {s, (outcome == +1 ? 1.0 : -1.0) * ph * s};
}

MeasurementBasis first_spin_basis(const ChainSpec& spec) {
    return spec.model == ChainModel::IsingEngineered ? MeasurementBasis::z_basis()
                                                     : MeasurementBasis::x_basis();
}

// ---------------------------------------------------------------------------
// ProtocolEngine

ProtocolEngine::ProtocolEngine(const ChainSpec& spec,
                               std::optional<double> evolution_time)
    : spec_(spec),
      time_(evolution_time ? *evolution_time : critical_time(spec)),
      u_(propagator(spec, time_)) {}

namespace {

int fair_coin(const OutcomeMode& mode) {
    if (mode.forced) return mode.forced_outcome;
    std::mt19937_64 eng(mode.seed);
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng) < 0.5 ? +1 : -1;
}

}  // namespace

ProtocolRun ProtocolEngine::run(const SingleQubitState& input,
                                const MediumSpec& medium,
                                const OutcomeMode& n_mode,
                                const OutcomeMode& m1_mode) const {
    return run(input, medium, prepare_medium(spec_, medium), n_mode, m1_mode);
}

ProtocolRun ProtocolEngine::run(const SingleQubitState& input,
                                const MediumSpec& medium,
                                const PreparedMedium& prepared,
                                const OutcomeMode& n_mode,
                                const OutcomeMode& m1_mode) const {
    const int n = spec_.n_sites;
    const int n_outcome = fair_coin(n_mode);
    const Eigen::Vector2cd n_ket = n_projection_ket(spec_, n_outcome);
    const MeasurementBasis basis = first_spin_basis(spec_);

    int m1_outcome = 0;
    double m1_prob = 0.0;
    Eigen::Matrix2cd rho_out;

    const bool pure_input = input.purity() > 1.0 - 1e-12;
    if (prepared.pure && pure_input) {
        // State-vector path.
        Vector total = kron_vec(kron_vec(input.principal_ket(), *prepared.pure),
                                Vector(n_ket));
        const StateVector evolved = evolve(u_, StateVector(n, std::move(total)));
        const auto meas = projective_measure(evolved, 1, basis, m1_mode);
        m1_outcome = meas.outcome;
        m1_prob = meas.probability;
        rho_out = partial_trace(DensityMatrix::from_state(meas.post_state), {n})
                      .matrix();
    } else {
        const Matrix rho_total =
            kron_chain(input.matrix().cast<Complex>(), prepared.mixed,
                       (n_ket * n_ket.adjoint()).cast<Complex>());
        const DensityMatrix evolved = evolve(u_, DensityMatrix(n, rho_total));
        const auto meas = projective_measure(evolved, 1, basis, m1_mode);
        m1_outcome = meas.outcome;
        m1_prob = meas.probability;
        rho_out = partial_trace(meas.post_state, {n}).matrix();
    }

    const int product = n_outcome * m1_outcome;
    const CorrectionRule corr = correction_rule(spec_, product);
    const SingleQubitState output(corr.unitary * rho_out * corr.unitary.adjoint());

    ProtocolRun rec{spec_,
                    time_,
                    input,
                    medium.label(),
                    n_outcome,
                    m1_outcome,
                    product,
                    m1_prob,
                    corr.label,
                    output,
                    state_fidelity(output, input),
                    m1_mode.forced ? n_mode.seed : m1_mode.seed};
    return rec;
}

UnprojectedRun ProtocolEngine::run_unprojected_n(const Eigen::Vector2cd& psi,
                                                 const MediumSpec& medium,
                                                 const SingleQubitState& rho_n,
                                                 const OutcomeMode& m1_mode) const {
    const int n = spec_.n_sites;
    const PreparedMedium prepared = prepare_medium(spec_, medium);
    const Eigen::Vector2cd psi_n = psi.normalized();
    const Matrix rho_total =
        kron_chain((psi_n * psi_n.adjoint()).cast<Complex>(), prepared.mixed,
                   rho_n.matrix().cast<Complex>());
    const DensityMatrix evolved = evolve(u_, DensityMatrix(n, rho_total));
    const auto meas =
        projective_measure(evolved, 1, first_spin_basis(spec_), m1_mode);
    const Matrix rho_red = partial_trace(meas.post_state, {n}).matrix();
    const CorrectionRule corr = correction_rule(spec_, meas.outcome);
    const SingleQubitState output(
        (corr.unitary * rho_red * corr.unitary.adjoint()).eval());
    return {meas.outcome, output,
            state_fidelity(output, SingleQubitState::from_ket(psi_n))};
}

StateVector ProtocolEngine::closed_form_pure(const Eigen::Vector2cd& psi,
                                             const std::string& medium_bits) const {
    if (spec_.model != ChainModel::IsingEngineered) {
        throw std::invalid_argument("closed_form_pure: Ising model only");
    }
    if (static_cast<int>(medium_bits.size()) != spec_.n_sites - 2) {
        throw std::invalid_argument("closed_form_pure: bitstring length must be N-2");
    }
    const Eigen::Vector2cd p = psi.normalized();
    const Eigen::Vector2cd xp = pauli_matrix(PauliLetter::X) * p;
    std::string rev = mirror_bits(medium_bits);
    std::string rev_flipped = rev;
    for (char& b : rev_flipped) b = b == '0' ? '1' : '0';

    const Vector k0 = (Vector(2) << 1, 0).finished();
    const Vector k1 = (Vector(2) << 0, 1).finished();
    Vector branch0 = kron_vec(kron_vec(k0, bits_to_ket(rev)), Vector(p));
    Vector branch1 = kron_vec(kron_vec(k1, bits_to_ket(rev_flipped)), Vector(xp));
    // Relative phase -i under U = exp(-iHt).
    Vector total = (branch0 - kI * branch1) / std::numbers::sqrt2;
    return StateVector(spec_.n_sites, std::move(total));
}

DensityMatrix ProtocolEngine::closed_form_mixed(const SingleQubitState& rho_in,
                                                const Matrix& medium_rho) const {
    const int n = spec_.n_sites;
    const int nm = n - 2;
    const Eigen::Index mdim = Eigen::Index{1} << std::max(nm, 0);
    if (medium_rho.rows() != mdim || medium_rho.cols() != mdim) {
        throw std::invalid_argument("closed_form_mixed: medium dimension mismatch");
    }
    const Matrix mirrored = mirror_inversion(medium_rho, nm);

    Matrix string_op = Matrix::Ones(1, 1);  // product of X (Ising) or Z (XX)
    const PauliLetter string_letter = spec_.model == ChainModel::IsingEngineered
                                          ? PauliLetter::X
                                          : PauliLetter::Z;
    for (int k = 0; k < nm; ++k) {
        string_op = kron(string_op, pauli_matrix(string_letter).cast<Complex>());
    }

    Eigen::Matrix2cd in = rho_in.matrix();
    Matrix med = mirrored;
    Eigen::Vector2cd b_plus, b_minus;  // spin-1 block basis
    Eigen::Matrix2cd end_op;           // X (Ising) or Z (XX) on spin N
    if (spec_.model == ChainModel::IsingEngineered) {
        b_plus = Eigen::Vector2cd(1, 0);
        b_minus = Eigen::Vector2cd(0, 1);
        end_op = pauli_matrix(PauliLetter::X);
    } else {
        const double s = 1.0 / std::numbers::sqrt2;
        b_plus = Eigen::Vector2cd(s, s);
        b_minus = Eigen::Vector2cd(s, -s);
        end_op = pauli_matrix(PauliLetter::Z);
        const Eigen::Matrix2cd tn = t_gate_power(n);
        Matrix decode = Matrix::Ones(1, 1);
        for (int k = 0; k < nm; ++k) decode = kron(decode, tn.cast<Complex>());
        med = decode.adjoint() * med * decode;       // rho-tilde
        in = tn.adjoint() * in * tn;                 // rho-tilde^in
    }

    const Matrix s_cross = med * string_op;              // S1 / S3
    const Matrix s_flip = string_op * med * string_op;   // S2 / S4
    const Eigen::Matrix2cd t_cross = in * end_op;        // T1 / T3
    const Eigen::Matrix2cd t_flip = end_op * in * end_op;

    const Matrix p_pp = (b_plus * b_plus.adjoint()).cast<Complex>();
    const Matrix p_mm = (b_minus * b_minus.adjoint()).cast<Complex>();
    const Matrix p_pm = (b_plus * b_minus.adjoint()).cast<Complex>();

    // Coherence block carries +i under U = exp(-iHt) for both models.
    const Matrix cross =
        kI * kron_chain(p_pm, s_cross, t_cross.cast<Complex>());
    Matrix rho_f = (kron_chain(p_pp, med, in.cast<Complex>()) +
                    kron_chain(p_mm, s_flip, t_flip.cast<Complex>()) + cross +
                    cross.adjoint()) /
                   2.0;
    return DensityMatrix(n, std::move(rho_f));
}

}  // namespace qst
