#include <doctest.h>

#include <cmath>

#include "qst/chain_models.hpp"

using namespace qst;

TEST_CASE("model names round-trip") {
    for (auto m : {ChainModel::IsingEngineered, ChainModel::XXEngineered,
                   ChainModel::XXHomogeneous}) {
        CHECK(chain_model_from_name(chain_model_name(m)) == m);
    }
    CHECK_THROWS(chain_model_from_name("heisenberg"));
}

TEST_CASE("spec validation") {
    ChainSpec s;
    s.n_sites = 1;
    CHECK_THROWS(s.validate());
    s.n_sites = 4;
    s.end_coupling_ratio = 0.7;  // ratio on an engineered model
    CHECK_THROWS(s.validate());
    s.model = ChainModel::XXHomogeneous;
    CHECK_NOTHROW(s.validate());
    s.end_coupling_ratio.reset();  // homogeneous requires the ratio
    CHECK_THROWS(s.validate());
}

TEST_CASE("coupling profiles match the closed forms") {
    ChainSpec ising;
    ising.model = ChainModel::IsingEngineered;
    ising.n_sites = 4;
    const auto p = coupling_profile(ising);
    REQUIRE(p.couplings.size() == 3);
    REQUIRE(p.fields.size() == 4);
    // J_2 = sqrt(4*2*2) = 4 at N = 4.
    CHECK(p.couplings[1] == doctest::Approx(4.0));
    CHECK(p.couplings[0] == doctest::Approx(std::sqrt(12.0)));
    CHECK(p.fields[0] == doctest::Approx(std::sqrt(7.0)));

    ChainSpec ising2 = ising;
    ising2.n_sites = 2;
    const auto p2 = coupling_profile(ising2);
    // B_1 = sqrt(1*3) = sqrt(3) at N = 2.
    CHECK(p2.fields[0] == doctest::Approx(std::sqrt(3.0)));
    CHECK(p2.fields[1] == doctest::Approx(std::sqrt(3.0)));
    CHECK(p2.couplings[0] == doctest::Approx(2.0));

    ChainSpec xx;
    xx.model = ChainModel::XXEngineered;
    xx.n_sites = 3;
    const auto px = coupling_profile(xx);
    CHECK(px.fields.empty());
    // K_1 = sqrt(1*2) = sqrt(2) at N = 3.
    CHECK(px.couplings[0] == doctest::Approx(std::sqrt(2.0)));
    CHECK(px.couplings[1] == doctest::Approx(std::sqrt(2.0)));

    ChainSpec hom;
    hom.model = ChainModel::XXHomogeneous;
    hom.n_sites = 5;
    hom.end_coupling_ratio = 0.7;
    const auto ph = coupling_profile(hom);
    CHECK(ph.couplings.front() == doctest::Approx(0.7));
    CHECK(ph.couplings.back() == doctest::Approx(0.7));
    CHECK(ph.couplings[1] == doctest::Approx(1.0));
}

TEST_CASE("profiles scale linearly in J and are mirror symmetric") {
    for (auto model : {ChainModel::IsingEngineered, ChainModel::XXEngineered}) {
        for (int n : {2, 5, 16, 64}) {
            ChainSpec s;
            s.model = model;
            s.n_sites = n;
            const auto p = coupling_profile(s);
            ChainSpec scaled = s;
            scaled.j_scale = 2.5;
            const auto ps = coupling_profile(scaled);
            for (size_t k = 0; k < p.couplings.size(); ++k) {
                CHECK(p.couplings[k] ==
                      doctest::Approx(p.couplings[p.couplings.size() - 1 - k]));
                CHECK(ps.couplings[k] == doctest::Approx(2.5 * p.couplings[k]));
            }
            for (size_t k = 0; k < p.fields.size(); ++k) {
                CHECK(p.fields[k] == doctest::Approx(p.fields[p.fields.size() - 1 - k]));
            }
        }
    }
}

TEST_CASE("dense hamiltonian equals the term-list sum") {
    for (auto model : {ChainModel::IsingEngineered, ChainModel::XXEngineered}) {
        ChainSpec s;
        s.model = model;
        s.n_sites = 5;
        Matrix sum = Matrix::Zero(32, 32);
        for (const auto& [coeff, op] : hamiltonian_terms(s)) {
            sum += coeff * pauli_to_matrix(op);
        }
        CHECK((sum - build_hamiltonian(s)).cwiseAbs().maxCoeff() < kAlgebraTol);
    }
}

TEST_CASE("N=2 ising hamiltonian, explicit matrix") {
    ChainSpec s;
    s.model = ChainModel::IsingEngineered;
    s.n_sites = 2;
    const Matrix h = build_hamiltonian(s);
    const Matrix ref =
        2.0 * pauli_to_matrix(PauliString(0, {PauliLetter::Z, PauliLetter::Z})) +
        std::sqrt(3.0) * (pauli_to_matrix(PauliString::single(2, 1, PauliLetter::X)) +
                          pauli_to_matrix(PauliString::single(2, 2, PauliLetter::X)));
    CHECK((h - ref).cwiseAbs().maxCoeff() < kAlgebraTol);
}

TEST_CASE("xx hamiltonians conserve total Z") {
    for (auto model : {ChainModel::XXEngineered, ChainModel::XXHomogeneous}) {
        ChainSpec s;
        s.model = model;
        s.n_sites = 4;
        if (model == ChainModel::XXHomogeneous) s.end_coupling_ratio = 0.7;
        const Matrix h = build_hamiltonian(s);
        Matrix zsum = Matrix::Zero(16, 16);
        for (int site = 1; site <= 4; ++site) {
            zsum += pauli_to_matrix(PauliString::single(4, site, PauliLetter::Z));
        }
        CHECK((h * zsum - zsum * h).cwiseAbs().maxCoeff() < kAlgebraTol);
    }
}

TEST_CASE("critical time") {
    ChainSpec s;
    s.n_sites = 6;
    CHECK(critical_time(s) == doctest::Approx(std::acos(-1.0) / 4.0));
    s.j_scale = 2.0;
    CHECK(critical_time(s) == doctest::Approx(std::acos(-1.0) / 8.0));
    ChainSpec hom;
    hom.model = ChainModel::XXHomogeneous;
    hom.n_sites = 6;
    hom.end_coupling_ratio = 0.7;
    CHECK_THROWS(critical_time(hom));
}

TEST_CASE("dense limit is enforced") {
    ChainSpec s;
    s.n_sites = 14;
    CHECK_THROWS_AS(build_hamiltonian(s), ResourceLimitError);
    s.n_sites = 5;
    CHECK_THROWS_AS(build_hamiltonian(s, 4), ResourceLimitError);
    CHECK_NOTHROW(build_hamiltonian(s, 5));
}
