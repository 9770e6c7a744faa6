#include "rvb/irhm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include "rvb/correlations.hpp"
#include "rvb/parallel.hpp"

namespace rvb {

OperatorMatrix irhm_hamiltonian(int n_sites, double coupling) {
    if (n_sites < 2)
        throw std::invalid_argument("irhm_hamiltonian: need at least two sites");
    OperatorMatrix op;
    op.mat = coupling * heisenberg_all_pairs_matrix(n_sites);
    op.label = "IRHM N=" + std::to_string(n_sites);
    return op;
}

double irhm_level_energy(int n_sites, double coupling, double total_spin) {
    return 0.5 * coupling * (total_spin * (total_spin + 1.0) - 0.75 * n_sites);
}

VecC apply_irhm(const VecC& v, int n_sites, double coupling) {
    VecC out = VecC::Zero(v.size());
    for (int i = 0; i < n_sites; ++i)
        for (int j = i + 1; j < n_sites; ++j)
            out += apply_heisenberg_pair(v, i, j, n_sites);
    return coupling * out;
}

namespace {

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

long spin_multiplet_count(int n_sites, double total_spin) {
    const int twice = static_cast<int>(std::lround(2.0 * total_spin));
    if ((n_sites + twice) % 2 != 0 || twice < 0) return 0;
    const int k = (n_sites - twice) / 2;
    return binomial(n_sites, k) - binomial(n_sites, k - 1);
}

IrhmSpectrum spectrum_check(int n_sites, double coupling, double tol) {
    if (n_sites < 2 || n_sites > 12)
        throw std::invalid_argument("spectrum_check: n_sites must be in [2, 12]");
    const Eigen::Index d = Eigen::Index{1} << n_sites;

    // collect basis indices per total-S^z sector and diagonalize sector-wise
    std::map<int, std::vector<Eigen::Index>> sectors;   // key: up-count
    for (Eigen::Index b = 0; b < d; ++b)
        sectors[std::popcount(static_cast<unsigned long long>(b))].push_back(b);

    std::map<int, long> counts;   // key: 2*S
    double worst = 0.0;
    for (const auto& [pop, idx] : sectors) {
        const Eigen::Index ds = static_cast<Eigen::Index>(idx.size());
        MatC h = MatC::Zero(ds, ds);
        for (Eigen::Index c = 0; c < ds; ++c) {
            VecC e = VecC::Zero(d);
            e[idx[c]] = 1.0;
            const VecC col = apply_irhm(e, n_sites, coupling);
            for (Eigen::Index r = 0; r < ds; ++r) h(r, c) = col[idx[r]];
        }
        Eigen::SelfAdjointEigenSolver<MatC> solver(h, Eigen::EigenvaluesOnly);
        for (Eigen::Index k = 0; k < ds; ++k) {
            const double e = solver.eigenvalues()[k];
            // invert (J/2)[S(S+1) - 3N/4]
            const double sval = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * (2.0 * e / coupling + 0.75 * n_sites)));
            const int twice = static_cast<int>(std::lround(2.0 * sval));
            const double err = std::abs(e - irhm_level_energy(n_sites, coupling, 0.5 * twice));
            if (twice < 0 || (twice + n_sites) % 2 != 0 || err > tol)
                throw std::runtime_error("spectrum_check: eigenvalue does not match any level");
            worst = std::max(worst, err);
            counts[twice] += 1;
        }
    }

    IrhmSpectrum spec;
    spec.n_sites = n_sites;
    spec.coupling = coupling;
    spec.max_match_error = worst;
    for (const auto& [twice, cnt] : counts) {
        IrhmLevel lvl;
        lvl.total_spin = 0.5 * twice;
        lvl.energy = irhm_level_energy(n_sites, coupling, lvl.total_spin);
        lvl.degeneracy = cnt;
        spec.levels.push_back(lvl);
    }
    return spec;
}

double dimer_eigencheck(const DimerCovering& cov, int n_sites, double coupling) {
    const PureState psi = dimer_state(cov, n_sites);
    const double e0 = irhm_level_energy(n_sites, coupling, 0.0);
    return (apply_irhm(psi.amplitudes(), n_sites, coupling) - e0 * psi.amplitudes()).norm();
}

double annihilation_identity_residual() {
    const PureState psi = dimer_state({{{0, 1}, {2, 3}}}, 4);
    const VecC& v = psi.amplitudes();
    VecC acc = apply_heisenberg_pair(v, 0, 2, 4);
    acc += apply_heisenberg_pair(v, 1, 3, 4);
    acc += apply_heisenberg_pair(v, 0, 3, 4);
    acc += apply_heisenberg_pair(v, 1, 2, 4);
    return acc.norm();
}

NamedState named_state_from_string(const std::string& name) {
    if (name == "HS") return NamedState::HS;
    if (name == "PSI6A") return NamedState::PSI6A;
    if (name == "PSI6B") return NamedState::PSI6B;
    throw std::invalid_argument("unknown named state: " + name);
}

std::string to_string(NamedState name) {
    switch (name) {
    case NamedState::HS: return "HS";
    case NamedState::PSI6A: return "PSI6A";
    case NamedState::PSI6B: return "PSI6B";
    }
    return "?";
}

namespace {

struct Term {
    int phase_power;   // power of the root of unity
    int sign;
    const char* config;   // site 0 first, 'u' = up
};

PureState state_from_terms(int n_sites, Cx root, const std::vector<Term>& terms) {
    VecC v = VecC::Zero(Eigen::Index{1} << n_sites);
    for (const auto& t : terms) {
        Eigen::Index idx = 0;
        for (int s = 0; s < n_sites; ++s)
            if (t.config[s] == 'u') idx |= Eigen::Index{1} << s;
        v[idx] += static_cast<double>(t.sign) * std::pow(root, t.phase_power);
    }
    PureState psi(n_sites, std::move(v));
    return psi.normalize();
}

const Cx kOmega3 = std::polar(1.0, 2.0 * M_PI / 3.0);
const Cx kOmega4 = Cx(0.0, 1.0);

// Four-qubit maximal state: equal-weight z-basis expansion with cube-root
// phases on the three antiparallel pair patterns.
const std::vector<Term> kHsTerms = {
    {0, +1, "udud"}, {0, +1, "dudu"},
    {1, +1, "uddu"}, {1, +1, "duud"},
    {2, +1, "uudd"}, {2, +1, "dduu"},
};

// Six-qubit resonance hybrids: twenty equal-magnitude amplitudes with
// fourth-root phases.
const std::vector<Term> kPsi6aTerms = {
    {0, +1, "ududud"}, {0, -1, "dududu"},
    {1, +1, "ududdu"}, {1, +1, "udduud"}, {1, +1, "duudud"},
    {1, -1, "uddudu"}, {1, -1, "duuddu"}, {1, -1, "duduud"},
    {2, +1, "uuddud"}, {2, +1, "uduudd"}, {2, +1, "dduduu"},
    {2, -1, "uududd"}, {2, -1, "dudduu"}, {2, -1, "dduudu"},
    {3, +1, "uuuddd"}, {3, +1, "uddduu"}, {3, +1, "dduuud"},
    {3, -1, "uudddu"}, {3, -1, "duuudd"}, {3, -1, "ddduuu"},
};

const std::vector<Term> kPsi6bTerms = {
    {0, +1, "ududud"}, {0, -1, "dududu"},
    {1, +1, "uduudd"}, {1, +1, "uddduu"}, {1, +1, "duudud"},
    {1, -1, "uddudu"}, {1, -1, "duuudd"}, {1, -1, "dudduu"},
    {2, +1, "uuddud"}, {2, +1, "ududdu"}, {2, +1, "dduuud"},
    {2, -1, "uudddu"}, {2, -1, "duduud"}, {2, -1, "dduudu"},
    {3, +1, "uuuddd"}, {3, +1, "dduduu"}, {3, +1, "udduud"},
    {3, -1, "uududd"}, {3, -1, "duuddu"}, {3, -1, "ddduuu"},
};

} // namespace

PureState build_named_state(NamedState name) {
    switch (name) {
    case NamedState::HS:
        return state_from_terms(4, kOmega3, kHsTerms);
    case NamedState::PSI6A:
        return state_from_terms(6, kOmega4, kPsi6aTerms);
    case NamedState::PSI6B:
        return state_from_terms(6, kOmega4, kPsi6bTerms);
    }
    throw std::logic_error("build_named_state: unreachable");
}

PureState named_state_superposition_form(NamedState name) {
    VecC v;
    switch (name) {
    case NamedState::HS:
        // resonance hybrid of the two non-crossing coverings; the first
        // orientation is flipped so the expansion phases come out right
        v = -kOmega3 * dimer_state({{{0, 1}, {2, 3}}}, 4).amplitudes() +
            kOmega3 * kOmega3 * dimer_state({{{0, 3}, {1, 2}}}, 4).amplitudes();
        break;
    case NamedState::PSI6A:
        v = kOmega4 * dimer_state({{{0, 1}, {2, 3}, {5, 4}}}, 6).amplitudes() +
            std::pow(kOmega4, 2) * dimer_state({{{5, 0}, {1, 2}, {3, 4}}}, 6).amplitudes() +
            std::pow(kOmega4, 3) * dimer_state({{{0, 3}, {1, 4}, {2, 5}}}, 6).amplitudes();
        break;
    case NamedState::PSI6B:
        v = kOmega4 * dimer_state({{{0, 1}, {2, 5}, {3, 4}}}, 6).amplitudes() +
            std::pow(kOmega4, 2) * dimer_state({{{1, 2}, {0, 3}, {4, 5}}}, 6).amplitudes() +
            std::pow(kOmega4, 3) * dimer_state({{{0, 5}, {1, 4}, {2, 3}}}, 6).amplitudes();
        break;
    default:
        throw std::logic_error("named_state_superposition_form: unreachable");
    }
    const int n = (name == NamedState::HS) ? 4 : 6;
    PureState psi(n, std::move(v));
    return psi.normalize();
}

namespace {

// Residuals and analytic Jacobian for the homogeneity system: for each pair
// (i,j), r = <v|SzSz|v>/<v|v> - target as a function of the real/imaginary
// basis coefficients.
struct HomogenizerWork {
    const VBBasis* basis;
    int n_sites;
    std::vector<std::pair<int, int>> pairs;
    std::vector<VecR> diag;   // SzSz diagonal per pair over the full space
    double target;

    explicit HomogenizerWork(const VBBasis& b, int n) : basis(&b), n_sites(n) {
        const Eigen::Index d = Eigen::Index{1} << n;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                pairs.emplace_back(i, j);
                VecR dg(d);
                for (Eigen::Index s = 0; s < d; ++s)
                    dg[s] = sz_of(s, i) * sz_of(s, j);
                diag.push_back(std::move(dg));
            }
        target = -1.0 / (4.0 * (n - 1));
    }

    VecC assemble(const VecR& theta) const {
        const Eigen::Index nl = basis->vectors.cols();
        VecC c(nl);
        for (Eigen::Index k = 0; k < nl; ++k)
            c[k] = Cx(theta[k], theta[nl + k]);
        return basis->vectors * c;
    }

    void residuals(const VecR& theta, VecR& r, MatR* jac) const {
        const Eigen::Index nl = basis->vectors.cols();
        const VecC v = assemble(theta);
        const double nrm2 = v.squaredNorm();
        const Eigen::Index np = static_cast<Eigen::Index>(pairs.size());
        r.resize(np);
        if (jac) jac->resize(np, 2 * nl);
        for (Eigen::Index p = 0; p < np; ++p) {
            const VecC dv = diag[p].cast<Cx>().cwiseProduct(v);
            const double quad = v.dot(dv).real();
            const double czz = quad / nrm2;
            r[p] = czz - target;
            if (!jac) continue;
            for (Eigen::Index k = 0; k < nl; ++k) {
                const Cx un_dv = basis->vectors.col(k).dot(dv);   // u_k^H (D v)
                const Cx un_v = basis->vectors.col(k).dot(v);     // u_k^H v
                // d czz / d Re(c_k) and d czz / d Im(c_k)
                (*jac)(p, k) = 2.0 * (un_dv.real() - czz * un_v.real()) / nrm2;
                (*jac)(p, nl + k) = 2.0 * (un_dv.imag() - czz * un_v.imag()) / nrm2;
            }
        }
    }
};

} // namespace

namespace {

struct RestartResult {
    VecR theta;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

RestartResult run_restart(const HomogenizerWork& work, const VBBasis& basis,
                          const HomogenizeOptions& opts, int restart) {
    const Eigen::Index nparam = 2 * basis.vectors.cols();
    std::mt19937_64 rng(opts.seed + static_cast<unsigned long>(restart));
    std::normal_distribution<double> gauss(0.0, 1.0);
    VecR theta(nparam);
    for (Eigen::Index k = 0; k < nparam; ++k) theta[k] = gauss(rng);
    theta.normalize();

    VecR r;
    MatR jac;
    work.residuals(theta, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (r.cwiseAbs().maxCoeff() < opts.tolerance) break;
        const MatR jtj = jac.transpose() * jac;
        const VecR jtr = jac.transpose() * r;
        bool stepped = false;
        while (lambda < 1e14) {
            MatR m = jtj;
            m.diagonal().array() += lambda;
            const VecR delta = m.ldlt().solve(-jtr);
            VecR cand = theta + delta;
            cand.normalize();
            VecR rc;
            work.residuals(cand, rc, nullptr);
            const double cc = rc.squaredNorm();
            if (cc < cost) {
                theta = cand;
                cost = cc;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!stepped) break;
        work.residuals(theta, r, &jac);
        cost = r.squaredNorm();
    }

    RestartResult out;
    out.theta = std::move(theta);
    out.residual = r.cwiseAbs().maxCoeff();
    out.iterations = it;
    return out;
}

} // namespace

HomogenizedState homogenize(int n_sites, const VBBasis& basis,
                            const HomogenizeOptions& opts) {
    if (n_sites < 4 || n_sites % 2 != 0)
        throw std::invalid_argument("homogenize: n_sites must be even and >= 4");
    if (basis.vectors.cols() < 1)
        throw std::invalid_argument("homogenize: empty basis");

    const HomogenizerWork work(basis, n_sites);
    const Eigen::Index nl = basis.vectors.cols();

    // restarts are independent and seeded by index, so a capped parallel
    // map selects the same winner a sequential loop would
    const auto results = batched_map<RestartResult>(
        opts.max_restarts,
        [&](int k) { return run_restart(work, basis, opts, k); },
        [&](const std::vector<RestartResult>& done) {
            for (const auto& res : done)
                if (res.residual < opts.tolerance) return true;
            return false;
        });

    int winner = -1;
    for (size_t k = 0; k < results.size(); ++k) {
        if (results[k].residual < opts.tolerance) {
            winner = static_cast<int>(k);
            break;
        }
    }
    if (winner < 0) {
        winner = 0;
        for (size_t k = 1; k < results.size(); ++k)
            if (results[k].residual < results[winner].residual)
                winner = static_cast<int>(k);
    }

    const auto& res = results[winner];
    VecC coeff(nl);
    for (Eigen::Index k = 0; k < nl; ++k)
        coeff[k] = Cx(res.theta[k], res.theta[nl + k]);
    PureState psi(n_sites, basis.vectors * coeff);
    psi.normalize();
    HomogenizedState best{std::move(psi)};
    best.coeffs = std::move(coeff);
    best.residual = res.residual;
    best.converged = res.residual < opts.tolerance;
    best.restarts_used = static_cast<int>(results.size());
    best.iterations = res.iterations;
    return best;
}

} // namespace rvb
