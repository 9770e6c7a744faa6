#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rvb/dynamics.hpp"
#include "rvb/entanglement.hpp"
#include "rvb/irhm.hpp"

using namespace rvb;

namespace {

// test-only closed forms, derived by integrating the mode sum twice:
// X(t) = sum_k g^2 coth(w/2T)(1 - cos wt)/w^2, Y(t) = -sum_k g^2 (wt - sin wt)/w^2
double closed_x(const BathSpec& spec, double t) {
    double x = 0.0;
    for (const auto& m : spec.modes) {
        const double cth = spec.temperature > 0.0
                               ? 1.0 / std::tanh(m.omega / (2.0 * spec.temperature))
                               : 1.0;
        x += m.g * m.g * cth * (1.0 - std::cos(m.omega * t)) / (m.omega * m.omega);
    }
    return x;
}

double closed_y(const BathSpec& spec, double t) {
    double y = 0.0;
    for (const auto& m : spec.modes)
        y -= m.g * m.g * (m.omega * t - std::sin(m.omega * t)) / (m.omega * m.omega);
    return y;
}

// closed form of F(t) = int_0^t alpha, used by the RK4 oracle below
Cx closed_f(const BathSpec& spec, double t) {
    Cx f = 0.0;
    for (const auto& m : spec.modes) {
        const double cth = spec.temperature > 0.0
                               ? 1.0 / std::tanh(m.omega / (2.0 * spec.temperature))
                               : 1.0;
        f += Cx(m.g * m.g * cth * std::sin(m.omega * t) / m.omega,
                -m.g * m.g * (1.0 - std::cos(m.omega * t)) / m.omega);
    }
    return f;
}

BathSpec sample_bath() {
    BathSpec spec;
    spec.modes = {{0.5, 1.3}, {0.8, 0.7}};
    spec.temperature = 0.5;
    return spec;
}

} // namespace

TEST_CASE("bath correlation function") {
    BathSpec spec = sample_bath();
    SUBCASE("tau = 0") {
        const Cx a = bath_correlation(spec, 0.0);
        double expected = 0.0;
        for (const auto& m : spec.modes)
            expected += m.g * m.g / std::tanh(m.omega / (2.0 * spec.temperature));
        CHECK(a.real() == doctest::Approx(expected));
        CHECK(a.imag() == doctest::Approx(0.0));
    }
    SUBCASE("single mode at T = 0") {
        BathSpec cold;
        cold.modes = {{1.0, 2.0}};
        cold.temperature = 0.0;
        const double tau = 0.63;
        const Cx a = bath_correlation(cold, tau);
        CHECK(a.real() == doctest::Approx(std::cos(2.0 * tau)));
        CHECK(a.imag() == doctest::Approx(-std::sin(2.0 * tau)));
    }
    SUBCASE("linearity in the modes") {
        BathSpec one, two;
        one.modes = {spec.modes[0]};
        two.modes = {spec.modes[1]};
        one.temperature = two.temperature = spec.temperature;
        const double tau = 1.7;
        CHECK(std::abs(bath_correlation(spec, tau) - bath_correlation(one, tau) -
                       bath_correlation(two, tau)) < 1e-14);
    }
    SUBCASE("invalid specs are rejected") {
        BathSpec bad;
        bad.modes = {{1.0, -1.0}};
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
        BathSpec cold;
        cold.modes = {{1.0, 1.0}};
        cold.temperature = -1.0;
        CHECK_THROWS_AS(cold.validate(), std::invalid_argument);
    }
}

TEST_CASE("quadrature X and Y against closed forms") {
    SUBCASE("single mode landmark values at t = pi") {
        BathSpec cold;
        cold.modes = {{1.0, 1.0}};
        cold.temperature = 0.0;
        const auto funcs = xy_functions(cold, default_time_grid(cold, M_PI));
        CHECK(funcs.x.back() == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(funcs.y.back() == doctest::Approx(-M_PI).epsilon(1e-9));
    }
    SUBCASE("ten random baths over t in [0, 20]") {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> gdist(0.1, 1.5);
        std::uniform_real_distribution<double> wdist(0.2, 3.0);
        std::uniform_real_distribution<double> tdist(0.0, 2.0);
        std::uniform_int_distribution<int> ndist(1, 3);
        for (int trial = 0; trial < 10; ++trial) {
            BathSpec spec;
            spec.temperature = tdist(rng);
            const int nm = ndist(rng);
            for (int k = 0; k < nm; ++k) spec.modes.push_back({gdist(rng), wdist(rng)});
            const auto funcs = xy_functions(spec, default_time_grid(spec, 20.0));
            double err = 0.0;
            for (size_t k = 0; k < funcs.time.size(); k += 97) {
                err = std::max(err, std::abs(funcs.x[k] - closed_x(spec, funcs.time[k])));
                err = std::max(err, std::abs(funcs.y[k] - closed_y(spec, funcs.time[k])));
            }
            CHECK(err < 1e-8);
        }
    }
    SUBCASE("X starts at zero and never decreases") {
        const BathSpec spec = sample_bath();
        const auto funcs = xy_functions(spec, default_time_grid(spec, 10.0));
        CHECK(funcs.x.front() == 0.0);
        CHECK(funcs.y.front() == 0.0);
        for (size_t k = 1; k < funcs.x.size(); ++k)
            CHECK(funcs.x[k] >= funcs.x[k - 1] - 1e-12);
    }
    SUBCASE("grid validation") {
        const BathSpec spec = sample_bath();
        CHECK_THROWS_AS(xy_functions(spec, {0.0, 0.1, 0.3}), std::invalid_argument);
        CHECK_THROWS_AS(xy_functions(spec, {0.5, 0.6, 0.7}), std::invalid_argument);
    }
}

TEST_CASE("labeled eigenbasis") {
    const int n = 4;
    const double coupling = irhm_default_coupling(n);
    const auto basis = irhm_eigenbasis(n, coupling);
    const MatC h = irhm_hamiltonian(n, coupling).mat;
    const MatC hh = basis.vectors.adjoint() * h * basis.vectors;
    const MatC zz = basis.vectors.adjoint() * sz_total_matrix(n) * basis.vectors;
    CHECK((hh - MatC(basis.energies.cast<Cx>().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((zz - MatC(basis.sz_labels.cast<Cx>().asDiagonal())).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((basis.vectors.adjoint() * basis.vectors - MatC::Identity(16, 16))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("closed-form evolution against an RK4 master-equation integration") {
    // independent oracle: integrate d rho/dt = -i[H,rho] + F[L rho, L] + F*[L, rho L]
    const int n = 4;
    const double coupling = irhm_default_coupling(n);
    const auto basis = irhm_eigenbasis(n, coupling);
    const BathSpec spec = sample_bath();

    // start from a superposition of the ground manifold and an (S=1, l=1) level
    const PureState hs = build_named_state(NamedState::HS);
    Eigen::Index excited = -1;
    const double e1 = irhm_level_energy(n, coupling, 1.0);
    for (Eigen::Index k = 0; k < basis.dim(); ++k)
        if (std::abs(basis.sz_labels[k] - 1.0) < 1e-9 &&
            std::abs(basis.energies[k] - e1) < 1e-9) {
            excited = k;
            break;
        }
    REQUIRE(excited >= 0);
    VecC psi0 = (hs.amplitudes() + basis.vectors.col(excited)) / std::sqrt(2.0);
    const MatC rho0 = psi0 * psi0.adjoint();

    const MatC h = irhm_hamiltonian(n, coupling).mat;
    const MatC lop = sz_total_matrix(n);
    const MatC l2 = lop * lop;
    auto rhs = [&](double t, const MatC& rho) -> MatC {
        const Cx f = closed_f(spec, t);
        return Cx(0, -1) * (h * rho - rho * h) + f * (lop * rho * lop - l2 * rho) +
               std::conj(f) * (lop * rho * lop - rho * l2);
    };

    const double t_end = 3.0;
    const int steps = 3000;
    const double dt = t_end / steps;
    MatC rho = rho0;
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        const MatC k1 = rhs(t, rho);
        const MatC k2 = rhs(t + dt / 2, rho + dt / 2 * k1);
        const MatC k3 = rhs(t + dt / 2, rho + dt / 2 * k2);
        const MatC k4 = rhs(t + dt, rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    const auto funcs = xy_functions(spec, default_time_grid(spec, t_end));
    const MatC rho_cf = evolve(rho0, basis, funcs, t_end);
    CHECK((rho - rho_cf).cwiseAbs().maxCoeff() < 1e-6);

    // trace and hermiticity are preserved exactly by the elementwise formula
    CHECK(std::abs(rho_cf.trace() - Cx(1.0)) < 1e-12);
    CHECK((rho_cf - rho_cf.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    // the cross-sector coherence decays with the e^{-dl^2 X} envelope
    const MatC r_eig = basis.to_eigenbasis(rho_cf);
    const MatC r0_eig = basis.to_eigenbasis(rho0);
    Eigen::Index ground = -1;
    for (Eigen::Index k = 0; k < basis.dim(); ++k)
        if (std::abs(r0_eig(k, excited)) > 0.01 && k != excited &&
            std::abs(basis.sz_labels[k]) < 1e-9) {
            ground = k;
            break;
        }
    REQUIRE(ground >= 0);
    const double envelope = std::exp(-funcs.x_at(t_end));
    CHECK(std::abs(r_eig(ground, excited)) ==
          doctest::Approx(std::abs(r0_eig(ground, excited)) * envelope).epsilon(1e-9));
}

TEST_CASE("evolution special cases") {
    const int n = 4;
    const double coupling = irhm_default_coupling(n);
    const auto basis = irhm_eigenbasis(n, coupling);
    const BathSpec spec = sample_bath();
    const auto funcs = xy_functions(spec, default_time_grid(spec, 5.0));

    SUBCASE("populations are frozen") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> gauss;
        VecC diag(basis.dim());
        for (Eigen::Index k = 0; k < basis.dim(); ++k) diag[k] = std::abs(gauss(rng));
        MatC r0 = MatC::Zero(basis.dim(), basis.dim());
        r0.diagonal() = diag / diag.sum().real();
        const MatC rt = evolve_in_eigenbasis(r0, basis, funcs, 4.0);
        CHECK((rt - r0).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("equal (E, l) coherences are frozen") {
        const auto dfs = dfs_subspace(n, coupling);
        REQUIRE(dfs.ground_indices.size() == 2);
        MatC r0 = MatC::Zero(basis.dim(), basis.dim());
        const int a = dfs.ground_indices[0], b = dfs.ground_indices[1];
        r0(a, a) = r0(b, b) = 0.5;
        r0(a, b) = Cx(0.3, 0.2);
        r0(b, a) = std::conj(r0(a, b));
        const MatC rt = evolve_in_eigenbasis(r0, basis, funcs, 4.0);
        CHECK((rt - r0).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("zero coupling reduces to unitary phases") {
        BathSpec off;
        off.modes = {{0.0, 1.0}};
        off.temperature = 0.0;
        const auto nofuncs = xy_functions(off, default_time_grid(off, 5.0));
        const PureState hs = build_named_state(NamedState::HS);
        VecC psi = (hs.amplitudes() +
                    basis.vectors.col(basis.dim() - 1)) / std::sqrt(2.0);
        const MatC r0 = psi * psi.adjoint();
        const double t = 2.5;
        const MatC rt = evolve(r0, basis, nofuncs, t);
        // exact unitary evolution
        VecC phases(basis.dim());
        for (Eigen::Index k = 0; k < basis.dim(); ++k)
            phases[k] = std::exp(Cx(0, -basis.energies[k] * t));
        const MatC u = basis.vectors * phases.asDiagonal() * basis.vectors.adjoint();
        CHECK((rt - u * r0 * u.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("decoherence-free subspace structure") {
    CHECK(dfs_subspace(4, irhm_default_coupling(4)).ground_indices.size() == 2);
    CHECK(dfs_subspace(6, irhm_default_coupling(6)).ground_indices.size() == 5);
    CHECK(dfs_subspace(8, irhm_default_coupling(8)).ground_indices.size() == 14);
    CHECK_THROWS_AS(dfs_subspace(12, 0.1), std::invalid_argument);
}

TEST_CASE("ground-manifold states are robust") {
    const BathSpec spec = sample_bath();
    const std::vector<double> times = {0.0, 5.0, 20.0, 50.0};
    SUBCASE("HS state") {
        const auto rep = rdm_robustness(build_named_state(NamedState::HS), spec, times,
                                        irhm_default_coupling(4));
        CHECK(rep.max_rdm_deviation < 1e-10);
        CHECK(rep.max_e2v_drift < 1e-9);
    }
    SUBCASE("six-qubit hybrid") {
        const auto rep = rdm_robustness(build_named_state(NamedState::PSI6A), spec, times,
                                        irhm_default_coupling(6));
        CHECK(rep.max_rdm_deviation < 1e-10);
        CHECK(rep.max_e2v_drift < 1e-9);
    }
    SUBCASE("negative control decays") {
        const int n = 4;
        const double coupling = irhm_default_coupling(n);
        const auto basis = irhm_eigenbasis(n, coupling);
        const PureState hs = build_named_state(NamedState::HS);
        Eigen::Index excited = -1;
        const double e1 = irhm_level_energy(n, coupling, 1.0);
        for (Eigen::Index k = 0; k < basis.dim(); ++k)
            if (std::abs(basis.sz_labels[k] - 1.0) < 1e-9 &&
                std::abs(basis.energies[k] - e1) < 1e-9) {
                excited = k;
                break;
            }
        VecC psi = (hs.amplitudes() + basis.vectors.col(excited)) / std::sqrt(2.0);
        PureState mixed_sector(n, psi);
        const auto rep = rdm_robustness(mixed_sector, spec, times, coupling);
        CHECK(rep.max_rdm_deviation > 0.01);
    }
}

TEST_CASE("bath JSON round trip") {
    const BathSpec spec = sample_bath();
    const BathSpec back = BathSpec::from_json(spec.to_json());
    REQUIRE(back.modes.size() == spec.modes.size());
    CHECK(back.temperature == spec.temperature);
    CHECK(back.modes[1].omega == spec.modes[1].omega);
}
