// Spin-chain Hamiltonians and their coupling/field profiles.
//
// Two engineered models admit perfect end-to-end transfer at t* = pi/(4J):
//   IsingEngineered:  H = sum J_i Z_i Z_{i+1} + sum B_i X_i
//                     J_i = J sqrt(4 i (N-i)),  B_i = J sqrt((2i-1)(2N-2i+1))
//   XXEngineered:     H = sum K_i (X_i X_{i+1} + Y_i Y_{i+1})
//                     K_i = J sqrt(i (N-i))
// XXHomogeneous is the uniform chain with weakened end bonds, used for the
// large-N average-fidelity estimate.
//
// Energies are in units of J, times in units of 1/J (hbar = 1).

#pragma once

#include <utility>
#include <vector>

#include "qst/quantum_core.hpp"

namespace qst {

enum class ChainModel { IsingEngineered, XXEngineered, XXHomogeneous };

const char* chain_model_name(ChainModel m);
ChainModel chain_model_from_name(const std::string& name);

inline constexpr int kDefaultDenseLimit = 12;

struct ChainSpec {
    ChainModel model = ChainModel::IsingEngineered;
    int n_sites = 2;
    double j_scale = 1.0;
    // End-bond weakening, XXHomogeneous only (e.g. 0.7).
    std::optional<double> end_coupling_ratio;

    void validate() const;
    bool is_engineered() const { return model != ChainModel::XXHomogeneous; }
};

struct CouplingProfile {
    std::vector<double> couplings;  // N-1 bond strengths
    std::vector<double> fields;     // N on-site fields; empty for XX models
};

CouplingProfile coupling_profile(const ChainSpec& spec);

// Term list (coefficient, Pauli string); the dense Hamiltonian is its sum.
std::vector<std::pair<double, PauliString>> hamiltonian_terms(const ChainSpec& spec);

Matrix build_hamiltonian(const ChainSpec& spec, int dense_limit = kDefaultDenseLimit);

// t* = pi/(4J); engineered models only.
double critical_time(const ChainSpec& spec);

}  // namespace qst
