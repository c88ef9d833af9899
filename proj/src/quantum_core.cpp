#include "qst/quantum_core.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

namespace qst {

namespace {

std::atomic<std::int64_t> g_psd_clip_count{0};

const Complex kI(0.0, 1.0);

}  // namespace

std::int64_t psd_clip_count() { return g_psd_clip_count.load(); }

// ---------------------------------------------------------------------------
// Pauli strings

char pauli_letter_char(PauliLetter l) {
    switch (l) {
        case PauliLetter::I: return 'I';
        case PauliLetter::X: return 'X';
        case PauliLetter::Y: return 'Y';
        case PauliLetter::Z: return 'Z';
    }
    return '?';
}

const Eigen::Matrix2cd& pauli_matrix(PauliLetter l) {
    static const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    static const Eigen::Matrix2cd x = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    static const Eigen::Matrix2cd y = (Eigen::Matrix2cd() << 0, -kI, kI, 0).finished();
    static const Eigen::Matrix2cd z = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    switch (l) {
        case PauliLetter::I: return id;
        case PauliLetter::X: return x;
        case PauliLetter::Y: return y;
        case PauliLetter::Z: return z;
    }
    return id;
}

PauliString PauliString::identity(int n_sites) {
    return PauliString(0, std::vector<PauliLetter>(n_sites, PauliLetter::I));
}

PauliString PauliString::single(int n_sites, int site, PauliLetter l) {
    if (site < 1 || site > n_sites) {
        throw std::invalid_argument("PauliString::single: site out of range");
    }
    std::vector<PauliLetter> ls(n_sites, PauliLetter::I);
    ls[site - 1] = l;
    return PauliString(0, std::move(ls));
}

Complex PauliString::phase() const {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[phase_power];
}

PauliString PauliString::operator*(const PauliString& rhs) const {
    if (letters.size() != rhs.letters.size()) {
        throw std::invalid_argument("PauliString product: size mismatch");
    }
    // Per-site products: result letter and accumulated power of i.
    // X*Y = iZ, Y*Z = iX, Z*X = iY; reversed order picks up -i.
    auto mul = [](PauliLetter a, PauliLetter b) -> std::pair<PauliLetter, int> {
        if (a == PauliLetter::I) return {b, 0};
        if (b == PauliLetter::I) return {a, 0};
        if (a == b) return {PauliLetter::I, 0};
        int ia = static_cast<int>(a);  // X=1, Y=2, Z=3
        int ib = static_cast<int>(b);
        // cyclic (X,Y,Z): (ib - ia) mod 3 == 1 -> +i, == 2 -> -i
        int third = 6 - ia - ib;
        bool forward = (ib - ia + 3) % 3 == 1;
        return {static_cast<PauliLetter>(third), forward ? 1 : 3};
    };
    PauliString out;
    out.letters.resize(letters.size());
    int power = phase_power + rhs.phase_power;
    for (std::size_t s = 0; s < letters.size(); ++s) {
        auto [l, p] = mul(letters[s], rhs.letters[s]);
        out.letters[s] = l;
        power += p;
    }
    out.phase_power = power % 4;
    return out;
}

std::string PauliString::to_string() const {
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    std::string s = prefix[phase_power];
    for (auto l : letters) s += pauli_letter_char(l);
    return s;
}

// ---------------------------------------------------------------------------
// States

StateVector::StateVector(int n_qubits, Vector amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits < 1) throw std::invalid_argument("StateVector: n_qubits < 1");
    if (amps_.size() != (Eigen::Index{1} << n_qubits)) {
        throw std::invalid_argument("StateVector: length is not 2^n_qubits");
    }
    const double norm2 = amps_.squaredNorm();
    if (std::abs(norm2 - 1.0) > kStructuralTol) {
        throw std::invalid_argument("StateVector: squared norm deviates from 1");
    }
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
    Vector v = Vector::Zero(Eigen::Index{1} << n_qubits);
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(n_qubits, std::move(v));
}

namespace {

// Shared validation: Hermiticity, unit trace, PSD with small-negative clipping.
Matrix validate_density(Matrix m, int n_qubits, const char* what) {
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    if (m.rows() != dim || m.cols() != dim) {
        throw std::invalid_argument(std::string(what) + ": wrong dimension");
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kStructuralTol) {
        throw std::invalid_argument(std::string(what) + ": not Hermitian");
    }
    if (std::abs(m.trace().real() - 1.0) > kStructuralTol ||
        std::abs(m.trace().imag()) > kStructuralTol) {
        throw std::invalid_argument(std::string(what) + ": trace deviates from 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const auto& w = es.eigenvalues();
    if (w.minCoeff() < -kPsdTol) {
        throw std::invalid_argument(std::string(what) + ": negative eigenvalue beyond tolerance");
    }
    if (w.minCoeff() < 0.0) {
        // Finite-precision outputs of thermal / partial-trace pipelines land
        // here; clip and renormalize.
        Eigen::VectorXd clipped = w.cwiseMax(0.0);
        g_psd_clip_count.fetch_add((w.array() < 0.0).count());
        clipped /= clipped.sum();
        m = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
    }
    return m;
}

}  // namespace

DensityMatrix::DensityMatrix(int n_qubits, Matrix matrix) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("DensityMatrix: n_qubits < 1");
    mat_ = validate_density(std::move(matrix), n_qubits, "DensityMatrix");
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    const Vector& a = psi.amplitudes();
    return DensityMatrix(psi.n_qubits(), a * a.adjoint());
}

SingleQubitState::SingleQubitState(const Eigen::Matrix2cd& matrix) {
    mat_ = validate_density(matrix, 1, "SingleQubitState");
}

SingleQubitState SingleQubitState::from_ket(const Eigen::Vector2cd& ket) {
    Eigen::Vector2cd k = ket.normalized();
    return SingleQubitState(k * k.adjoint());
}

double SingleQubitState::purity() const {
    return (mat_ * mat_).trace().real();
}

Eigen::Vector2cd SingleQubitState::principal_ket() const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(mat_);
    return es.eigenvectors().col(1);  // largest eigenvalue last
}

DensityMatrix SingleQubitState::as_density_matrix() const {
    return DensityMatrix(1, mat_);
}

// ---------------------------------------------------------------------------
// Operations

Matrix kron(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw std::invalid_argument("kron: operands must be square");
    }
    const double log_dim = std::log2(double(a.rows())) + std::log2(double(b.rows()));
    if (log_dim > kMaxKronQubits) {
        throw ResourceLimitError("kron: result exceeds the dense qubit limit");
    }
    return Eigen::kroneckerProduct(a, b);
}

Matrix pauli_to_matrix(const PauliString& p) {
    Matrix out = Matrix::Identity(1, 1) * p.phase();
    for (auto l : p.letters) {
        out = kron(out, pauli_matrix(l).cast<Complex>());
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = rho.n_qubits();
    if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep-set");
    std::vector<int> ks = keep;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    for (int s : ks) {
        if (s < 1 || s > n) throw std::invalid_argument("partial_trace: site out of range");
    }
    const int k = static_cast<int>(ks.size());
    std::vector<int> traced;
    for (int s = 1; s <= n; ++s) {
        if (!std::binary_search(ks.begin(), ks.end(), s)) traced.push_back(s);
    }
    const std::uint64_t kd = std::uint64_t{1} << k;
    const std::uint64_t td = std::uint64_t{1} << traced.size();
    // Site s occupies bit (n - s); kept sites keep their relative order.
    auto expand = [&](std::uint64_t kept_bits, std::uint64_t traced_bits) {
        std::uint64_t idx = 0;
        for (int j = 0; j < k; ++j) {
            if (kept_bits >> (k - 1 - j) & 1) idx |= std::uint64_t{1} << (n - ks[j]);
        }
        for (std::size_t j = 0; j < traced.size(); ++j) {
            if (traced_bits >> (traced.size() - 1 - j) & 1) {
                idx |= std::uint64_t{1} << (n - traced[j]);
            }
        }
        return idx;
    };
    Matrix out = Matrix::Zero(kd, kd);
    for (std::uint64_t r = 0; r < kd; ++r) {
        for (std::uint64_t c = 0; c < kd; ++c) {
            Complex sum = 0;
            for (std::uint64_t t = 0; t < td; ++t) {
                sum += rho.matrix()(expand(r, t), expand(c, t));
            }
            out(r, c) = sum;
        }
    }
    return DensityMatrix(k, std::move(out));
}

// ---------------------------------------------------------------------------
// Measurement

MeasurementBasis MeasurementBasis::z_basis() {
    return {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};
}

MeasurementBasis MeasurementBasis::x_basis() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {Eigen::Vector2cd(s, s), Eigen::Vector2cd(s, -s)};
}

MeasurementBasis MeasurementBasis::custom(const Eigen::Vector2cd& plus,
                                          const Eigen::Vector2cd& minus) {
    if (std::abs(plus.norm() - 1.0) > kStructuralTol ||
        std::abs(minus.norm() - 1.0) > kStructuralTol ||
        std::abs(plus.dot(minus)) > kStructuralTol) {
        throw std::invalid_argument("MeasurementBasis: pair is not orthonormal");
    }
    return {plus, minus};
}

OutcomeMode OutcomeMode::sample(std::uint64_t seed) {
    OutcomeMode m;
    m.forced = false;
    m.seed = seed;
    return m;
}

OutcomeMode OutcomeMode::force(int outcome) {
    if (outcome != +1 && outcome != -1) {
        throw std::invalid_argument("OutcomeMode::force: outcome must be +/-1");
    }
    OutcomeMode m;
    m.forced = true;
    m.forced_outcome = outcome;
    return m;
}

namespace {

// Full-register projector onto a single-qubit ket at a 1-based site.
Matrix site_projector(int n, int site, const Eigen::Vector2cd& ket) {
    const Matrix p2 = ket * ket.adjoint();
    Matrix left = Matrix::Identity(Eigen::Index{1} << (site - 1),
                                   Eigen::Index{1} << (site - 1));
    Matrix right = Matrix::Identity(Eigen::Index{1} << (n - site),
                                    Eigen::Index{1} << (n - site));
    return kron(kron(left, p2), right);
}

int pick_outcome(const OutcomeMode& mode, double p_plus) {
    if (mode.forced) return mode.forced_outcome;
    std::mt19937_64 eng(mode.seed);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(eng);
    return u < p_plus ? +1 : -1;
}

void check_outcome_probability(double p) {
    if (p < 1e-12) {
        throw std::invalid_argument("projective_measure: forced outcome has probability < 1e-12");
    }
}

}  // namespace

double outcome_plus_probability(const StateVector& state, int site,
                                const MeasurementBasis& basis) {
    const Matrix p = site_projector(state.n_qubits(), site, basis.plus);
    return (p * state.amplitudes()).squaredNorm();
}

double outcome_plus_probability(const DensityMatrix& state, int site,
                                const MeasurementBasis& basis) {
    const Matrix p = site_projector(state.n_qubits(), site, basis.plus);
    return (p * state.matrix()).trace().real();
}

PureMeasurement projective_measure(const StateVector& state, int site,
                                   const MeasurementBasis& basis,
                                   const OutcomeMode& mode) {
    const int n = state.n_qubits();
    if (site < 1 || site > n) throw std::invalid_argument("projective_measure: bad site");
    const double p_plus = outcome_plus_probability(state, site, basis);
    const int outcome = pick_outcome(mode, p_plus);
    const double p = outcome == +1 ? p_plus : 1.0 - p_plus;
    check_outcome_probability(p);
    const Matrix proj =
        site_projector(n, site, outcome == +1 ? basis.plus : basis.minus);
    Vector post = proj * state.amplitudes();
    post /= post.norm();
    return {{outcome, p}, StateVector(n, std::move(post))};
}

MixedMeasurement projective_measure(const DensityMatrix& state, int site,
                                    const MeasurementBasis& basis,
                                    const OutcomeMode& mode) {
    const int n = state.n_qubits();
    if (site < 1 || site > n) throw std::invalid_argument("projective_measure: bad site");
    const double p_plus = outcome_plus_probability(state, site, basis);
    const int outcome = pick_outcome(mode, p_plus);
    const double p = outcome == +1 ? p_plus : 1.0 - p_plus;
    check_outcome_probability(p);
    const Matrix proj =
        site_projector(n, site, outcome == +1 ? basis.plus : basis.minus);
    Matrix post = proj * state.matrix() * proj;
    post /= post.trace();
    return {{outcome, p}, DensityMatrix(n, std::move(post))};
}

// ---------------------------------------------------------------------------
// State generation

double GaussianStream::next() {
    if (spare_) {
        double v = *spare_;
        spare_.reset();
        return v;
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u1 = 0.0;
    do {
        u1 = unif(engine_);
    } while (u1 <= 0.0);
    const double u2 = unif(engine_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

Complex GaussianStream::next_complex() {
    const double re = next();
    const double im = next();
    return {re, im};
}

StateVector random_pure_state(int n_qubits, std::uint64_t seed) {
    GaussianStream g(seed);
    Vector v(Eigen::Index{1} << n_qubits);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g.next_complex();
    v /= v.norm();
    return StateVector(n_qubits, std::move(v));
}

DensityMatrix random_mixed_state(int n_qubits, int rank, std::uint64_t seed) {
    if (rank < 1) throw std::invalid_argument("random_mixed_state: rank < 1");
    GaussianStream g(seed);
    const Eigen::Index dim = Eigen::Index{1} << n_qubits;
    Matrix a(dim, rank);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (int j = 0; j < rank; ++j) a(i, j) = g.next_complex();
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    return DensityMatrix(n_qubits, std::move(rho));
}

DensityMatrix thermal_state(const Matrix& hamiltonian, double beta) {
    if (beta < 0.0) throw std::invalid_argument("thermal_state: beta < 0");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
    if (es.info() != Eigen::Success) {
        throw NumericalError("thermal_state: eigendecomposition failed");
    }
    // Shift by the ground energy so exp() stays in range at large beta.
    Eigen::VectorXd w = -beta * (es.eigenvalues().array() - es.eigenvalues().minCoeff());
    Eigen::VectorXd boltz = w.array().exp();
    boltz /= boltz.sum();
    const int n = static_cast<int>(std::lround(std::log2(double(hamiltonian.rows()))));
    return DensityMatrix(n, es.eigenvectors() * boltz.asDiagonal() *
                                es.eigenvectors().adjoint());
}

// ---------------------------------------------------------------------------
// Measures

double state_fidelity(const SingleQubitState& a, const SingleQubitState& b) {
    // Pure branch first: <psi|rho|psi> avoids the sqrt(det) term, whose
    // rounding noise (det ~ 1e-17 for a numerically pure state) would
    // otherwise inject ~1e-9 of spurious fidelity.
    if (a.purity() > 1.0 - 1e-12) {
        const Eigen::Vector2cd k = a.principal_ket();
        return std::clamp((k.adjoint() * b.matrix() * k)(0).real(), 0.0, 1.0);
    }
    if (b.purity() > 1.0 - 1e-12) return state_fidelity(b, a);
    // Both mixed: closed form for qubits, F = tr(ab) + 2 sqrt(det a det b).
    const auto& ma = a.matrix();
    const auto& mb = b.matrix();
    const double tr = (ma * mb).trace().real();
    const double dets = std::max(0.0, ma.determinant().real()) *
                        std::max(0.0, mb.determinant().real());
    const double f = tr + 2.0 * std::sqrt(dets);
    return std::clamp(f, 0.0, 1.0);
}

double entropy(const Eigen::SelfAdjointEigenSolver<Matrix>::RealVectorType& eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double p = eigenvalues(i);
        if (p > 1e-14) s -= p * std::log2(p);
    }
    return s;
}

double entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
    return entropy(es.eigenvalues());
}

double binary_entropy(double p) {
    double s = 0.0;
    if (p > 1e-14) s -= p * std::log2(p);
    if (1.0 - p > 1e-14) s -= (1.0 - p) * std::log2(1.0 - p);
    return s;
}

double trace_distance(const Matrix& a, const Matrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a - b, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qst
