// Aggregate experiments: fidelity-vs-purity sweeps, medium-robustness sweeps,
// and entanglement structure reports.

#pragma once

#include "qst/protocol.hpp"

namespace qst {

// Compares the simulated fidelity against the two closed-form candidates for
// the transfer fidelity at non-unit spin-N purity:
//   A: p00 + (1-p00) <psi|X|psi>      (linear, as printed)
//   B: p00 + (1-p00) <psi|X|psi>^2    (squared admixture overlap)
// The simulation is ground truth; the winner is the candidate within
// tolerance, and only if the other misses by a clear margin.
struct P00SweepReport {
    std::string psi_label;
    double x_expectation = 0.0;
    std::vector<double> p00_grid;
    std::vector<double> simulated;
    std::vector<double> candidate_a;
    std::vector<double> candidate_b;
    double max_dev_a = 0.0;
    double max_dev_b = 0.0;
    std::string winner;  // "linear" | "squared" | "indistinguishable"
};

P00SweepReport p00_sweep(const ProtocolEngine& engine, const Eigen::Vector2cd& psi,
                         const std::vector<double>& p00_grid);

struct MediumSweepCell {
    ChainModel model;
    int n_sites = 0;
    std::string medium_label;
    int runs = 0;
    double min_fidelity = 1.0;
    double mean_fidelity = 0.0;
};

struct MediumSweepOptions {
    int pure_inputs_per_cell = 20;
    int mixed_inputs_per_cell = 5;
    std::uint64_t seed = 0;
};

// Every (N, medium variant) cell, both forced outcome products, pure and
// mixed inputs. Deterministic given the seed.
std::vector<MediumSweepCell> medium_sweep(ChainModel model,
                                          const std::vector<int>& n_range,
                                          const std::vector<MediumSpec>& media,
                                          const MediumSweepOptions& opts);

// Default robustness matrix: random Z-product, random X-eigenstate product,
// thermal beta in {0, 0.5, 2}, maximally mixed, Haar-random pure, random mixed.
std::vector<MediumSpec> default_medium_variants(int n_medium, std::uint64_t seed);

struct EntanglementReport {
    std::string psi_label;
    double x_expectation = 0.0;
    // Entropy across the contiguous cut between sites k and k+1, k = 1..N-1.
    std::vector<double> cut_entropies;
    std::vector<double> site_entropies;  // single-site entropies, sites 1..N
    double spin1_entropy = 0.0;
    // Entropy of the transfer site (spin N), which carries the psi / X psi
    // admixture; follows the binary-entropy law H2((1 + <X>)/2).
    double knob_entropy = 0.0;
    double ghz_fraction_proxy = 0.0;  // equals knob_entropy, labeled as proxy
};

EntanglementReport entanglement_report(const ProtocolEngine& engine,
                                       const Eigen::Vector2cd& psi,
                                       const std::string& medium_bits);

}  // namespace qst
