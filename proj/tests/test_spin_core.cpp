#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rvb/correlations.hpp"
#include "rvb/spin_ops.hpp"
#include "rvb/valence_bond.hpp"

using namespace rvb;

namespace {

PureState up_state() {
    VecC v(2);
    v << 0.0, 1.0;   // bit set = up
    return PureState(1, v);
}

PureState singlet_pair() {
    return dimer_state({{{0, 1}}}, 2);
}

PureState random_st0_state(int n, unsigned seed) {
    // random superposition of singlet coverings: S_T = 0 by construction
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    VecC v = VecC::Zero(Eigen::Index{1} << n);
    for (const auto& cov : all_coverings(n))
        v += Cx(gauss(rng), gauss(rng)) * dimer_state(cov, n).amplitudes();
    PureState s(n, v);
    return s.normalize();
}

} // namespace

TEST_CASE("single-site spin operators") {
    const PureState up = up_state();

    const PureState sz_up = apply_spin(SpinOp::Sz, 0, up);
    CHECK((sz_up.amplitudes() - 0.5 * up.amplitudes()).norm() == doctest::Approx(0.0));

    const PureState raised = apply_spin(SpinOp::Splus, 0, up);
    CHECK(raised.norm() == doctest::Approx(0.0));

    // S-S+ + S+S- acts as the identity on any single-site state
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    VecC v(2);
    v << Cx(gauss(rng), gauss(rng)), Cx(gauss(rng), gauss(rng));
    PureState psi(1, v);
    psi.normalize();
    const VecC a = apply_spin(SpinOp::Sminus, 0, apply_spin(SpinOp::Splus, 0, psi)).amplitudes();
    const VecC b = apply_spin(SpinOp::Splus, 0, apply_spin(SpinOp::Sminus, 0, psi)).amplitudes();
    CHECK((a + b - psi.amplitudes()).norm() < 1e-14);

    CHECK_THROWS_AS(apply_spin(SpinOp::Sz, 1, up), std::out_of_range);
}

TEST_CASE("correlations of elementary states") {
    SUBCASE("two-site singlet") {
        const auto c = correlations(singlet_pair());
        CHECK(c.czz(0, 1) == doctest::Approx(-0.25).epsilon(1e-12));
        CHECK(c.cpm(0, 1).real() == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(std::abs(c.cpm(0, 1).imag()) < 1e-14);
        CHECK(c.sz.cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("both up") {
        VecC v = VecC::Zero(4);
        v[3] = 1.0;
        const auto c = correlations(PureState(2, v));
        CHECK(c.czz(0, 1) == doctest::Approx(0.25));
        CHECK(c.sz[0] == doctest::Approx(0.5));
        CHECK(c.sz[1] == doctest::Approx(0.5));
    }
    SUBCASE("czz diagonal is 1/4 and cpm is Hermitian") {
        const PureState psi = random_st0_state(6, 11);
        const auto c = correlations(psi);
        for (int i = 0; i < 6; ++i) CHECK(c.czz(i, i) == doctest::Approx(0.25));
        CHECK((c.cpm - c.cpm.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("partial trace basics") {
    SUBCASE("singlet marginal is maximally mixed") {
        const MatC rho = partial_trace(singlet_pair(), {0});
        CHECK((rho - 0.5 * MatC::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("product state marginal is a pure projector") {
        VecC v = VecC::Zero(4);
        v[1] = 1.0;   // site 0 up, site 1 down
        const MatC rho = partial_trace(PureState(2, v), {0});
        CHECK(rho(1, 1).real() == doctest::Approx(1.0));
        CHECK(std::abs(rho(0, 0)) < 1e-14);
    }
    SUBCASE("keep-set validation") {
        CHECK_THROWS_AS(partial_trace(singlet_pair(), {}), std::invalid_argument);
        CHECK_THROWS_AS(partial_trace(singlet_pair(), {0, 1}), std::invalid_argument);
    }
    SUBCASE("trace one, Hermitian, PSD") {
        const PureState psi = random_st0_state(6, 3);
        const MatC rho = partial_trace(psi, {1, 4});
        CHECK(std::abs(rho.trace() - Cx(1.0)) < 1e-12);
        CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<MatC> es(rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        CHECK(es.eigenvalues().maxCoeff() < 1.0 + 1e-12);
    }
}

TEST_CASE("total Sz eigencheck") {
    SUBCASE("singlet product has Sz = 0") {
        const PureState psi = dimer_state({{{0, 1}, {2, 3}}}, 4);
        const auto res = sz_total_eigencheck(psi);
        CHECK(res.is_eigenstate);
        CHECK(res.eigenvalue == doctest::Approx(0.0));
    }
    SUBCASE("GHZ-type superposition is not an eigenstate") {
        VecC v = VecC::Zero(4);
        v[0] = v[3] = 1.0 / std::sqrt(2.0);
        const auto res = sz_total_eigencheck(PureState(2, v));
        CHECK_FALSE(res.is_eigenstate);
        CHECK(res.out_of_sector_weight == doctest::Approx(0.5));
    }
    SUBCASE("polarized state has Sz = N/2") {
        VecC v = VecC::Zero(8);
        v[7] = 1.0;
        const auto res = sz_total_eigencheck(PureState(3, v));
        CHECK(res.is_eigenstate);
        CHECK(res.eigenvalue == doctest::Approx(1.5));
    }
}

TEST_CASE("pair RDM from correlations matches the partial trace") {
    // dual-route check over random S_T = 0 superpositions
    for (const int n : {4, 6}) {
        for (const unsigned seed : {1u, 2u, 3u}) {
            const PureState psi = random_st0_state(n, seed);
            const auto corr = correlations(psi);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const MatC direct = partial_trace(psi, {i, j});
                    const Eigen::Matrix4cd assembled = rdm_from_correlations(corr, i, j);
                    CHECK((direct - assembled).cwiseAbs().maxCoeff() < 1e-10);
                }
        }
    }
}

TEST_CASE("corner blocks vanish for Sz eigenstates with zero magnetization") {
    const PureState psi = random_st0_state(6, 5);
    const MatC rho = partial_trace(psi, {0, 3});
    for (const auto& [r, c] : std::vector<std::pair<int, int>>{
             {0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}, {1, 0}, {2, 0}, {3, 0}, {3, 1}, {3, 2}})
        CHECK(std::abs(rho(r, c)) < 1e-12);
}

TEST_CASE("sum rule: row sums of czz equal -1/4 for Sz=0 eigenstates") {
    for (const int n : {4, 6, 8}) {
        const PureState psi = random_st0_state(n, 17u + n);
        const auto c = correlations(psi);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) row += c.czz(i, j);
            CHECK(row == doctest::Approx(-0.25).epsilon(1e-10));
        }
    }
}

TEST_CASE("spin algebra as matrices") {
    const int n = 3;
    const MatC sx = spin_matrix(SpinOp::Sx, 1, n);
    const MatC sy = spin_matrix(SpinOp::Sy, 1, n);
    const MatC sz = spin_matrix(SpinOp::Sz, 1, n);
    // [Sx, Sy] = i Sz on the same site
    CHECK((commutator(sx, sy) - Cx(0, 1) * sz).cwiseAbs().maxCoeff() < 1e-14);
    // different sites commute
    CHECK(commutator_norm(sx, spin_matrix(SpinOp::Sy, 2, n)) < 1e-14);
    // Casimir matches the operator application path
    const MatC s2 = s2_total_matrix(n);
    VecC e = VecC::Zero(8);
    e[5] = 1.0;
    CHECK((s2 * e - apply_s2_total(e, n)).norm() < 1e-14);
}

TEST_CASE("JSON round trip") {
    const PureState psi = random_st0_state(4, 23);
    const PureState back = PureState::from_json(psi.to_json());
    CHECK(back.n_sites() == 4);
    CHECK((back.amplitudes() - psi.amplitudes()).norm() < 1e-15);
}
