// Dense complex linear algebra and qubit-register primitives: tensor
// products, Pauli strings, partial trace, projective measurement, state
// generation and distance measures.
//
// Conventions used throughout the library:
//   - site 1 is the most significant tensor factor; the basis index of an
//     N-qubit register carries the bit of site s at position (N - s).
//   - structural invariants (norm, trace, Hermiticity) are enforced to 1e-10,
//     algebraic identities to 1e-12.
//   - all values are immutable after construction; operations are pure.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;

// Hard cap for kron() results; anything larger is a resource bug, not physics.
inline constexpr int kMaxKronQubits = 24;

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Count of density-matrix eigenvalues in [-1e-9, 0) clipped to zero during
// validation. Diagnostic only; atomic so concurrent sweeps stay safe.
std::int64_t psd_clip_count();

// ---------------------------------------------------------------------------
// Pauli strings

enum class PauliLetter : std::uint8_t { I, X, Y, Z };

char pauli_letter_char(PauliLetter l);

const Eigen::Matrix2cd& pauli_matrix(PauliLetter l);

// Phased tensor product of single-site Pauli letters. The phase is a power of
// i, so products of PauliStrings close over the same set.
struct PauliString {
    int phase_power = 0;  // phase = i^phase_power, reduced mod 4
    std::vector<PauliLetter> letters;

    PauliString() = default;
    PauliString(int phase_pow, std::vector<PauliLetter> ls)
        : phase_power(((phase_pow % 4) + 4) % 4), letters(std::move(ls)) {}

    static PauliString identity(int n_sites);
    // Single non-identity letter at 1-based site.
    static PauliString single(int n_sites, int site, PauliLetter l);

    int n_sites() const { return static_cast<int>(letters.size()); }
    Complex phase() const;
    PauliString operator*(const PauliString& rhs) const;
    std::string to_string() const;
};

// ---------------------------------------------------------------------------
// States

class StateVector {
public:
    StateVector(int n_qubits, Vector amplitudes);
    static StateVector basis_state(int n_qubits, std::uint64_t index);

    int n_qubits() const { return n_qubits_; }
    const Vector& amplitudes() const { return amps_; }

private:
    int n_qubits_;
    Vector amps_;
};

class DensityMatrix {
public:
    DensityMatrix(int n_qubits, Matrix matrix);
    static DensityMatrix from_state(const StateVector& psi);

    int n_qubits() const { return n_qubits_; }
    const Matrix& matrix() const { return mat_; }

private:
    int n_qubits_;
    Matrix mat_;
};

// 2x2 density matrix; same invariants as DensityMatrix.
class SingleQubitState {
public:
    explicit SingleQubitState(const Eigen::Matrix2cd& matrix);
    static SingleQubitState from_ket(const Eigen::Vector2cd& ket);

    const Eigen::Matrix2cd& matrix() const { return mat_; }
    double purity() const;
    // Principal eigenvector; only meaningful when purity is ~1.
    Eigen::Vector2cd principal_ket() const;

    DensityMatrix as_density_matrix() const;

private:
    Eigen::Matrix2cd mat_;
};

// ---------------------------------------------------------------------------
// Operations

// Standard tensor product; rejects results beyond kMaxKronQubits qubits.
Matrix kron(const Matrix& a, const Matrix& b);

Matrix pauli_to_matrix(const PauliString& p);

// Reduced density matrix on the kept 1-based sites (ascending order in the
// result register). Throws on an empty keep-set.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// ---------------------------------------------------------------------------
// Projective measurement

struct MeasurementBasis {
    Eigen::Vector2cd plus;   // outcome +1 eigenvector
    Eigen::Vector2cd minus;  // outcome -1 eigenvector

    static MeasurementBasis z_basis();
    static MeasurementBasis x_basis();
    // Custom orthonormal pair; orthonormality checked to 1e-10.
    static MeasurementBasis custom(const Eigen::Vector2cd& plus,
                                   const Eigen::Vector2cd& minus);
};

struct OutcomeMode {
    static OutcomeMode sample(std::uint64_t seed);
    static OutcomeMode force(int outcome);

    bool forced = false;
    int forced_outcome = +1;
    std::uint64_t seed = 0;
};

struct MeasurementResult {
    int outcome = +1;  // +1 or -1
    double probability = 0.0;
};

struct PureMeasurement : MeasurementResult {
    StateVector post_state;
};
struct MixedMeasurement : MeasurementResult {
    DensityMatrix post_state;
};

PureMeasurement projective_measure(const StateVector& state, int site,
                                   const MeasurementBasis& basis,
                                   const OutcomeMode& mode);
MixedMeasurement projective_measure(const DensityMatrix& state, int site,
                                    const MeasurementBasis& basis,
                                    const OutcomeMode& mode);

// Born probability of outcome +1 without collapsing.
double outcome_plus_probability(const StateVector& state, int site,
                                const MeasurementBasis& basis);
double outcome_plus_probability(const DensityMatrix& state, int site,
                                const MeasurementBasis& basis);

// ---------------------------------------------------------------------------
// State generation

// Deterministic gaussian sampler built on std::mt19937_64 and an explicit
// Box-Muller transform, so streams replay bit-identically everywhere.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
    double next();
    Complex next_complex();  // standard complex gaussian

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

StateVector random_pure_state(int n_qubits, std::uint64_t seed);
DensityMatrix random_mixed_state(int n_qubits, int rank, std::uint64_t seed);
DensityMatrix thermal_state(const Matrix& hamiltonian, double beta);

// ---------------------------------------------------------------------------
// Measures

// Uhlmann fidelity, squared convention: F(|psi>, rho) = <psi|rho|psi>.
double state_fidelity(const SingleQubitState& a, const SingleQubitState& b);

// von Neumann entropy in bits.
double entropy(const DensityMatrix& rho);
double entropy(const Eigen::SelfAdjointEigenSolver<Matrix>::RealVectorType& eigenvalues);

double binary_entropy(double p);

double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace qst
