// The transfer protocol for both engineered models: projection of spin N,
// one-shot evolution to t*, end-spin measurement, conditional correction.
// Also the closed-form output states used as independent oracles.
//
// Flow per model (site 1 holds the input, site N receives it):
//   Ising: spin N pre-projected onto a Z eigenstate; after evolution spin 1
//          is measured in the Z basis; outcome product +1 -> identity,
//          -1 -> X correction on spin N.
//   XX:    spin N pre-projected onto |+-_N> = (|0> +- e^{iN pi/2}|1>)/sqrt(2);
//          spin 1 measured in the X basis; outcome product +1 -> conjugate by
//          T^N, -1 -> by Z T^N = T^(N+2), with T = diag(1, i) so T^2 = Z.

#pragma once

#include <string>
#include <vector>

#include "qst/dense_engine.hpp"

namespace qst {

// Recipe for the state of the medium (sites 2..N-1; may be empty at N=2).
struct MediumSpec {
    enum class Variant {
        ProductZ,        // computational-basis bitstring
        ProductStates,   // per-site 2x2 density matrices
        XEigenstates,    // product of |+>/|-> per sign
        Thermal,         // reduced state of exp(-beta H)/Z on sites 2..N-1
        MaximallyMixed,
        RandomPure,      // Haar-random pure state of the whole medium register
        RandomMixed,     // random rank-limited mixed state
    };

    Variant variant = Variant::MaximallyMixed;
    std::string bits;                          // ProductZ
    std::vector<Eigen::Matrix2cd> states;      // ProductStates
    std::vector<int> signs;                    // XEigenstates, entries +/-1
    double beta = 0.0;                         // Thermal
    std::uint64_t seed = 0;                    // RandomPure / RandomMixed
    int rank = 1;                              // RandomMixed

    static MediumSpec product_z(std::string bits);
    static MediumSpec product_states(std::vector<Eigen::Matrix2cd> states);
    static MediumSpec x_eigenstates(std::vector<int> signs);
    static MediumSpec thermal(double beta);
    static MediumSpec maximally_mixed();
    static MediumSpec random_pure(std::uint64_t seed);
    static MediumSpec random_mixed(std::uint64_t seed, int rank);

    void validate(int n_medium) const;
    std::string label() const;
};

// Medium register ready for assembly; `pure` is set for the variants that
// admit a state-vector path. The matrix is 1x1 for an empty medium.
struct PreparedMedium {
    int n_medium = 0;
    std::optional<Vector> pure;
    Matrix mixed;
};

PreparedMedium prepare_medium(const ChainSpec& spec, const MediumSpec& medium);

// Reversal of the medium register (site k <-> N+1-k restricted to 2..N-1).
Matrix mirror_inversion(const Matrix& medium_rho, int n_medium);
std::string mirror_bits(const std::string& bits);

struct CorrectionRule {
    std::string label;       // identity | X | T^N | T^(N+2)
    Eigen::Matrix2cd unitary;
};

// The model's correction for a given outcome product (validated numerically
// for every N mod 4; see the protocol tests).
CorrectionRule correction_rule(const ChainSpec& spec, int outcome_product);

struct ProtocolRun {
    ChainSpec spec;
    double evolution_time = 0.0;
    SingleQubitState input;
    std::string medium_label;
    int n_projection_outcome = +1;
    int first_spin_outcome = +1;
    int outcome_product = +1;
    double first_spin_probability = 0.0;
    std::string correction_applied;
    SingleQubitState output;
    double fidelity = 0.0;
    std::uint64_t seed = 0;
};

struct UnprojectedRun {
    int first_spin_outcome = +1;
    SingleQubitState output;
    double fidelity = 0.0;
};

// Holds the propagator for one (spec, time); every run is a pure function of
// its arguments, so batch sweeps can share one engine per chain.
class ProtocolEngine {
public:
    // Engineered models default to t*; XXHomogeneous requires an explicit
    // evolution time (there is no closed-form perfect time).
    explicit ProtocolEngine(const ChainSpec& spec,
                            std::optional<double> evolution_time = std::nullopt);

    const ChainSpec& spec() const { return spec_; }
    double evolution_time() const { return time_; }
    const Propagator& prop() const { return u_; }

    // Full protocol. A sampled spin-N projection outcome is a fair coin (the
    // pre-projection state of spin N is outside the protocol's knowledge).
    ProtocolRun run(const SingleQubitState& input, const MediumSpec& medium,
                    const OutcomeMode& n_mode, const OutcomeMode& m1_mode) const;
    ProtocolRun run(const SingleQubitState& input, const MediumSpec& medium,
                    const PreparedMedium& prepared, const OutcomeMode& n_mode,
                    const OutcomeMode& m1_mode) const;

    // Spin N starts in rho_n with no projection; the correction is keyed to
    // the spin-1 outcome alone (assumed N-outcome +1).
    UnprojectedRun run_unprojected_n(const Eigen::Vector2cd& psi,
                                     const MediumSpec& medium,
                                     const SingleQubitState& rho_n,
                                     const OutcomeMode& m1_mode) const;

    // |Psi_F> for the Ising model, Z-product medium, spin N pre-projected to
    // |0>. Relative phase is -i under U = exp(-iHt).
    StateVector closed_form_pure(const Eigen::Vector2cd& psi,
                                 const std::string& medium_bits) const;

    // Four-block closed form, spin N pre-projected (|0> Ising, |+_N> XX);
    // medium_rho is any density matrix on the N-2 medium sites (1x1 at N=2).
    DensityMatrix closed_form_mixed(const SingleQubitState& rho_in,
                                    const Matrix& medium_rho) const;

private:
    ChainSpec spec_;
    double time_;
    Propagator u_;
};

// diag(1, i)^(n mod 4)
Eigen::Matrix2cd t_gate_power(int n);

// Spin-N pre-projection ket for the given outcome (+1/-1).
Eigen::Vector2cd n_projection_ket(const ChainSpec& spec, int outcome);

// Spin-1 measurement basis (Z for Ising, X for XX-type).
MeasurementBasis first_spin_basis(const ChainSpec& spec);

}  // namespace qst
