#include "qst/chain_models.hpp"

#include <cmath>
#include <numbers>

namespace qst {

const char* chain_model_name(ChainModel m) {
    switch (m) {
        case ChainModel::IsingEngineered: return "ising_engineered";
        case ChainModel::XXEngineered: return "xx_engineered";
        case ChainModel::XXHomogeneous: return "xx_homogeneous";
    }
    return "?";
}

ChainModel chain_model_from_name(const std::string& name) {
    if (name == "ising_engineered") return ChainModel::IsingEngineered;
    if (name == "xx_engineered") return ChainModel::XXEngineered;
    if (name == "xx_homogeneous") return ChainModel::XXHomogeneous;
    throw std::invalid_argument("unknown chain model: " + name);
}

void ChainSpec::validate() const {
    if (n_sites < 2) throw std::invalid_argument("ChainSpec: n_sites must be >= 2");
    if (!(j_scale > 0.0)) throw std::invalid_argument("ChainSpec: j_scale must be > 0");
    if (model == ChainModel::XXHomogeneous) {
        if (!end_coupling_ratio || !(*end_coupling_ratio > 0.0)) {
            throw std::invalid_argument(
                "ChainSpec: XXHomogeneous requires a positive end_coupling_ratio");
        }
    } else if (end_coupling_ratio) {
        throw std::invalid_argument(
            "ChainSpec: end_coupling_ratio only applies to XXHomogeneous");
    }
}

CouplingProfile coupling_profile(const ChainSpec& spec) {
    spec.validate();
    const int n = spec.n_sites;
    const double j = spec.j_scale;
    CouplingProfile p;
    p.couplings.reserve(n - 1);
    switch (spec.model) {
        case ChainModel::IsingEngineered:
            for (int i = 1; i < n; ++i) {
                p.couplings.push_back(j * std::sqrt(4.0 * i * (n - i)));
            }
            p.fields.reserve(n);
            for (int i = 1; i <= n; ++i) {
                p.fields.push_back(j * std::sqrt(double(2 * i - 1) * (2 * n - 2 * i + 1)));
            }
            break;
        case ChainModel::XXEngineered:
            for (int i = 1; i < n; ++i) {
                p.couplings.push_back(j * std::sqrt(double(i) * (n - i)));
            }
            break;
        case ChainModel::XXHomogeneous: {
            const double end = *spec.end_coupling_ratio * j;
            for (int i = 1; i < n; ++i) {
                p.couplings.push_back(i == 1 || i == n - 1 ? end : j);
            }
            break;
        }
    }
    return p;
}

std::vector<std::pair<double, PauliString>> hamiltonian_terms(const ChainSpec& spec) {
    const CouplingProfile p = coupling_profile(spec);
    const int n = spec.n_sites;
    std::vector<std::pair<double, PauliString>> terms;
    const bool ising = spec.model == ChainModel::IsingEngineered;
    for (int i = 1; i < n; ++i) {
        if (ising) {
            terms.emplace_back(p.couplings[i - 1],
                               PauliString::single(n, i, PauliLetter::Z) *
                                   PauliString::single(n, i + 1, PauliLetter::Z));
        } else {
            terms.emplace_back(p.couplings[i - 1],
                               PauliString::single(n, i, PauliLetter::X) *
                                   PauliString::single(n, i + 1, PauliLetter::X));
            terms.emplace_back(p.couplings[i - 1],
                               PauliString::single(n, i, PauliLetter::Y) *
                                   PauliString::single(n, i + 1, PauliLetter::Y));
        }
    }
    for (std::size_t i = 0; i < p.fields.size(); ++i) {
        terms.emplace_back(p.fields[i],
                           PauliString::single(n, static_cast<int>(i) + 1, PauliLetter::X));
    }
    return terms;
}

Matrix build_hamiltonian(const ChainSpec& spec, int dense_limit) {
    spec.validate();
    if (spec.n_sites > dense_limit) {
        throw ResourceLimitError("build_hamiltonian: n_sites beyond dense limit");
    }
    const Eigen::Index dim = Eigen::Index{1} << spec.n_sites;
    Matrix h = Matrix::Zero(dim, dim);
    for (const auto& [coeff, op] : hamiltonian_terms(spec)) {
        h += coeff * pauli_to_matrix(op);
    }
    return h;
}

double critical_time(const ChainSpec& spec) {
    spec.validate();
    if (!spec.is_engineered()) {
        throw std::invalid_argument(
            "critical_time: no closed-form perfect-transfer time for XXHomogeneous");
    }
    return std::numbers::pi / (4.0 * spec.j_scale);
}

}  // namespace qst
