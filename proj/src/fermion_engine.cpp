#include "qst/fermion_engine.hpp"

#include <cmath>

namespace qst {

HoppingMatrix hopping_matrix(const ChainSpec& spec) {
    spec.validate();
    if (spec.model == ChainModel::IsingEngineered) {
        throw std::invalid_argument(
            "hopping_matrix: the Ising model has no single-excitation sector");
    }
    const CouplingProfile p = coupling_profile(spec);
    const int n = spec.n_sites;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n - 1; ++i) {
        h(i, i + 1) = h(i + 1, i) = kHoppingScale * p.couplings[i];
    }
    return {n, std::move(h)};
}

FermionPropagator::FermionPropagator(const ChainSpec& spec) : spec_(spec) {
    const HoppingMatrix h = hopping_matrix(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
    if (es.info() != Eigen::Success) {
        throw NumericalError("FermionPropagator: eigendecomposition failed");
    }
    eigenvalues_ = es.eigenvalues();
    first_row_ = es.eigenvectors().row(0);
    last_row_ = es.eigenvectors().row(h.n_sites - 1);
}

Complex FermionPropagator::transfer_amplitude(double t) const {
    Complex f = 0.0;
    for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
        f += last_row_(k) * first_row_(k) * std::exp(Complex(0.0, -eigenvalues_(k) * t));
    }
    return f;
}

Complex transfer_amplitude(const ChainSpec& spec, double t) {
    return FermionPropagator(spec).transfer_amplitude(t);
}

double average_fidelity_estimate(Complex f) {
    const double a = std::abs(f);
    if (a > 1.0 + 1e-9) {
        throw std::invalid_argument("average_fidelity_estimate: |f| > 1");
    }
    return 0.5 + a / 3.0 + a * a / 6.0;
}

TransferOptimum optimize_transfer_time(const ChainSpec& spec, double t_max,
                                       int grid_points) {
    if (!(t_max > 0.0)) throw std::invalid_argument("optimize_transfer_time: t_max <= 0");
    if (grid_points < 2) throw std::invalid_argument("optimize_transfer_time: grid_points < 2");
    const FermionPropagator prop(spec);

    TransferOptimum out;
    out.curve.times.reserve(grid_points);
    out.curve.amplitudes.reserve(grid_points);
    out.curve.avg_fidelities.reserve(grid_points);
    int best = 0;
    for (int k = 0; k < grid_points; ++k) {
        const double t = t_max * k / (grid_points - 1);
        const double a = std::min(1.0, std::abs(prop.transfer_amplitude(t)));
        out.curve.times.push_back(t);
        out.curve.amplitudes.push_back(a);
        out.curve.avg_fidelities.push_back(average_fidelity_estimate(a));
        if (a > out.curve.amplitudes[best]) best = k;
    }

    // Parabolic refinement through the best grid point and its neighbors;
    // never worse than the grid itself.
    double t_opt = out.curve.times[best];
    double a_opt = out.curve.amplitudes[best];
    if (best > 0 && best + 1 < grid_points) {
        const double h = t_max / (grid_points - 1);
        const double am = out.curve.amplitudes[best - 1];
        const double a0 = out.curve.amplitudes[best];
        const double ap = out.curve.amplitudes[best + 1];
        const double denom = am - 2.0 * a0 + ap;
        if (std::abs(denom) > 1e-300) {
            const double shift = 0.5 * (am - ap) / denom;
            if (std::abs(shift) <= 1.0) {
                const double t_ref = t_opt + shift * h;
                const double a_ref =
                    std::min(1.0, std::abs(prop.transfer_amplitude(t_ref)));
                if (a_ref > a_opt) {
                    t_opt = t_ref;
                    a_opt = a_ref;
                }
            }
        }
    }
    out.t_opt = t_opt;
    out.abs_f_max = a_opt;
    return out;
}

}  // namespace qst
