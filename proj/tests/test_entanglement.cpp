#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rvb/entanglement.hpp"
#include "rvb/irhm.hpp"
#include "rvb/valence_bond.hpp"

using namespace rvb;

namespace {

// frozen reference values, computed independently
constexpr double kE2vMax4 = 1.7924812503605783;   // 1 + 0.5 log2(3)
constexpr double kE2vMax6 = 1.9219280948873623;   // log2(5) - 2/5
constexpr double kE2vMax8 = 1.9591904234199458;
constexpr double kRingPairEntropy = 1.2075187496394219;

PureState random_vb_superposition(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    VecC v = VecC::Zero(Eigen::Index{1} << n);
    for (const auto& cov : rumer_coverings(n))
        v += Cx(gauss(rng), gauss(rng)) * dimer_state(cov, n).amplitudes();
    PureState s(n, v);
    return s.normalize();
}

} // namespace

TEST_CASE("entropy of simple density matrices") {
    CHECK(entropy_vn(0.5 * MatC::Identity(2, 2)) == doctest::Approx(1.0));
    MatC proj = MatC::Zero(2, 2);
    proj(0, 0) = 1.0;
    CHECK(entropy_vn(proj) == doctest::Approx(0.0));
    CHECK(entropy_vn(0.25 * MatC::Identity(4, 4)) == doctest::Approx(2.0));
    // slightly negative eigenvalues inside tolerance are clipped
    MatC noisy = MatC::Identity(2, 2);
    noisy(0, 0) = 1.0 + 1e-13;
    noisy(1, 1) = -1e-13;
    CHECK(entropy_vn(noisy) == doctest::Approx(0.0).epsilon(1e-9));
    MatC bad = MatC::Identity(2, 2);
    bad(1, 1) = -0.5;
    CHECK_THROWS_AS(entropy_vn(bad), std::domain_error);
}

TEST_CASE("closed-form isotropic pair entropy") {
    CHECK(entropy_isotropic_closed_form(-1.0 / 12.0) ==
          doctest::Approx(kE2vMax4).epsilon(1e-12));
    CHECK(entropy_isotropic_closed_form(0.0) == doctest::Approx(2.0));
    CHECK(entropy_isotropic_closed_form(-0.5 / 3.0) ==
          doctest::Approx(kRingPairEntropy).epsilon(1e-12));
    // infinite-chain correlation quote
    CHECK(entropy_isotropic_closed_form(-0.443 / 3.0) ==
          doctest::Approx(1.3762635561537475).epsilon(1e-12));
    CHECK_THROWS_AS(entropy_isotropic_closed_form(-0.3), std::domain_error);
    CHECK_THROWS_AS(entropy_isotropic_closed_form(0.1), std::domain_error);
}

TEST_CASE("closed form agrees with the eigenvalue route on isotropic states") {
    for (const int n : {4, 6}) {
        for (const unsigned seed : {2u, 9u}) {
            const PureState psi = random_vb_superposition(n, seed);
            const auto corr = correlations(psi);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double direct = entropy_vn(partial_trace(psi, {i, j}));
                    const double closed = entropy_isotropic_closed_form(corr.czz(i, j));
                    CHECK(direct == doctest::Approx(closed).epsilon(1e-9));
                }
        }
    }
}

TEST_CASE("pair-average entropy") {
    SUBCASE("product of two singlets") {
        const PureState psi = dimer_state({{{0, 1}, {2, 3}}}, 4);
        // pairs inside a singlet are pure (entropy 0), cross pairs maximally
        // mixed (entropy 2): average (2*0 + 4*2)/6 = 4/3
        CHECK(e2v_average(psi) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
        CHECK(entropy_vn(partial_trace(psi, {0, 1})) == doctest::Approx(0.0));
        CHECK(entropy_vn(partial_trace(psi, {0, 2})) == doctest::Approx(2.0));
    }
    SUBCASE("HS state saturates the four-site bound") {
        CHECK(e2v_average(build_named_state(NamedState::HS)) ==
              doctest::Approx(kE2vMax4).epsilon(1e-10));
    }
}

TEST_CASE("closed-form maximum") {
    CHECK(e2v_max(4) == doctest::Approx(kE2vMax4).epsilon(1e-14));
    CHECK(e2v_max(6) == doctest::Approx(kE2vMax6).epsilon(1e-14));
    CHECK(e2v_max(8) == doctest::Approx(kE2vMax8).epsilon(1e-14));
    CHECK_THROWS_AS(e2v_max(2), std::invalid_argument);
    CHECK_THROWS_AS(e2v_max(5), std::invalid_argument);

    SUBCASE("monotone increasing, below 2, near 2 by N = 300") {
        double prev = 0.0;
        for (int n = 4; n <= 40; n += 2) {
            const double v = e2v_max(n);
            CHECK(v > prev);
            CHECK(v < 2.0);
            prev = v;
        }
        CHECK(2.0 - e2v_max(300) < 0.01);
    }
}

TEST_CASE("constrained maximization lands on the homogeneous point") {
    for (const int n : {4, 6, 10}) {
        const auto res = maximize_e2v_numeric(n);
        CHECK(res.converged);
        CHECK(res.czz_spread < 1e-6);
        const double target = -1.0 / (4.0 * (n - 1));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                CHECK(res.czz(i, j) == doctest::Approx(target).epsilon(1e-6));
        CHECK(res.e2v == doctest::Approx(e2v_max(n)).epsilon(1e-8));
    }
}

TEST_CASE("i-concurrence") {
    SUBCASE("maximally mixed marginals give the normalizer") {
        CHECK(iconcurrence_max() == doctest::Approx(std::sqrt(1.5)));
    }
    SUBCASE("HS state value from the Werner spectrum") {
        const double expected = std::sqrt(4.0 / 3.0);
        CHECK(iconcurrence(build_named_state(NamedState::HS)) ==
              doctest::Approx(expected).epsilon(1e-10));
        CHECK(iconcurrence_homogeneous(4) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("product state of all up") {
        VecC v = VecC::Zero(16);
        v[15] = 1.0;
        CHECK(iconcurrence(PureState(4, v)) == doctest::Approx(0.0));
    }
    SUBCASE("homogenized states maximize among sampled superpositions") {
        for (const int n : {4, 6, 8}) {
            const double best = iconcurrence_homogeneous(n);
            std::mt19937_64 rng(99);
            for (int trial = 0; trial < 100; ++trial) {
                const PureState psi = random_vb_superposition(n, static_cast<unsigned>(rng()));
                CHECK(iconcurrence(psi) <= best + 1e-9);
            }
        }
    }
}

TEST_CASE("Werner fit and PPT separability") {
    SUBCASE("pure singlet") {
        const auto fit = werner_fit(werner_state(1.0));
        CHECK(fit.p == doctest::Approx(1.0));
        CHECK(fit.residual < 1e-12);
        const auto ppt = ppt_separability(werner_state(1.0));
        CHECK(ppt.negativity == doctest::Approx(0.5).epsilon(1e-12));
        CHECK_FALSE(ppt.separable);
    }
    SUBCASE("maximally mixed") {
        const auto fit = werner_fit(werner_state(0.0));
        CHECK(fit.p == doctest::Approx(0.0));
        CHECK(ppt_separability(werner_state(0.0)).separable);
    }
    SUBCASE("boundary p = 1/3") {
        const auto ppt = ppt_separability(werner_state(1.0 / 3.0));
        CHECK(ppt.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(ppt.separable);
    }
    SUBCASE("pair RDM of the HS state is Werner with p = 1/3") {
        const PureState hs = build_named_state(NamedState::HS);
        const Eigen::Matrix4cd rho = partial_trace(hs, {0, 1});
        const auto fit = werner_fit(rho);
        CHECK(fit.p == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
        CHECK(fit.residual < 1e-10);
        CHECK(ppt_separability(rho).separable);
    }
}

TEST_CASE("monogamy and telecloning bounds dominate the exact Werner p") {
    for (int n = 4; n <= 100; n += 2) {
        const double exact = 1.0 / (n - 1);
        const double telecloning = 1.0 / 3.0 + 2.0 / (3.0 * (n - 1));
        const double monogamy = 1.0 / 3.0 + 2.0 / (3.0 * std::sqrt(n - 1.0));
        CHECK(exact <= telecloning);
        CHECK(telecloning <= monogamy);
    }
}
