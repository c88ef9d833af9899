// Single-excitation (free-fermion) propagators for XX-type chains at large N:
// end-to-end transfer amplitude, time optimization, and the average-fidelity
// estimate for the homogeneous chain with weakened end couplings.

#pragma once

#include <vector>

#include "qst/chain_models.hpp"

namespace qst {

// Spin-to-hopping scale: X X + Y Y = 2(|01><10| + |10><01|), so the
// single-excitation hopping element on bond i is 2 K_i. Calibrated once
// against the dense engine (the calibration test is kept in the suite).
inline constexpr double kHoppingScale = 2.0;

struct HoppingMatrix {
    int n_sites = 0;
    Eigen::MatrixXd matrix;  // real symmetric tridiagonal, zero diagonal
};

// XX models only; rejects the Ising model.
HoppingMatrix hopping_matrix(const ChainSpec& spec);

// Caches the hopping eigendecomposition so time scans stay cheap.
class FermionPropagator {
public:
    explicit FermionPropagator(const ChainSpec& spec);

    // Entry (N, 1) of exp(-i h t): the end-to-end transfer amplitude.
    Complex transfer_amplitude(double t) const;

    const ChainSpec& spec() const { return spec_; }

private:
    ChainSpec spec_;
    Eigen::VectorXd eigenvalues_;
    Eigen::VectorXd first_row_;  // eigenvector components at site 1
    Eigen::VectorXd last_row_;   // eigenvector components at site N
};

Complex transfer_amplitude(const ChainSpec& spec, double t);

// F_avg = 1/2 + |f|/3 + |f|^2/6. The paper quotes its >=0.87 figure without
// the estimator; this is the standard single-excitation map and every output
// is labeled an estimate.
double average_fidelity_estimate(Complex f);

struct TransferCurve {
    std::vector<double> times;
    std::vector<double> amplitudes;      // |f(t)|
    std::vector<double> avg_fidelities;  // estimate per time point
};

struct TransferOptimum {
    double t_opt = 0.0;
    double abs_f_max = 0.0;
    TransferCurve curve;
};

// Grid scan over [0, t_max] plus parabolic refinement around the best point.
TransferOptimum optimize_transfer_time(const ChainSpec& spec, double t_max,
                                       int grid_points);

}  // namespace qst
