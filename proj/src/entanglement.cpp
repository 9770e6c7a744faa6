#include "rvb/entanglement.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rvb {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

constexpr double kSingletCorr = -0.25;   // row-sum constraint value

} // namespace

double entropy_vn(const MatC& rho, double psd_tol) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::domain_error("entropy_vn: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<MatC> solver(rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < rho.rows(); ++k) {
        double lam = solver.eigenvalues()[k];
        if (lam < -psd_tol)
            throw std::domain_error("entropy_vn: matrix is not PSD");
        if (lam < 0.0) lam = 0.0;
        s -= xlog2x(lam);
    }
    return s;
}

double entropy_isotropic_closed_form(double czz) {
    const double a = 1.0 + 4.0 * czz;
    const double b = 1.0 - 12.0 * czz;
    if (a < 0.0 || b < 0.0)
        throw std::domain_error("entropy_isotropic_closed_form: czz outside [-1/4, 1/12]");
    return 2.0 - 0.25 * (3.0 * xlog2x(a) + xlog2x(b));
}

double e2v_average(const PureState& state) {
    const int n = state.n_sites();
    if (n < 2) throw std::invalid_argument("e2v_average: need at least two sites");
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            total += entropy_vn(partial_trace(state, {i, j}));
    return total / (0.5 * n * (n - 1));
}

double e2v_average_density(const MatC& rho, int n_sites) {
    double total = 0.0;
    for (int i = 0; i < n_sites; ++i)
        for (int j = i + 1; j < n_sites; ++j)
            total += entropy_vn(partial_trace_density(rho, {i, j}, n_sites));
    return total / (0.5 * n_sites * (n_sites - 1));
}

double e2v_max(int n_sites) {
    if (n_sites < 4 || n_sites % 2 != 0)
        throw std::invalid_argument("e2v_max: n_sites must be even and >= 4");
    const double c = -1.0 / (4.0 * (n_sites - 1));
    return entropy_isotropic_closed_form(c);
}

E2vMaximization maximize_e2v_numeric(int n_sites, int starts,
                                     unsigned long seed, double grad_tol) {
    if (n_sites < 4 || n_sites % 2 != 0)
        throw std::invalid_argument("maximize_e2v_numeric: n_sites must be even and >= 4");
    const int n = n_sites;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const int np = static_cast<int>(pairs.size());

    // Affine constraint A c = b: per-site row sums of czz equal -1/4.
    MatR A = MatR::Zero(n, np);
    for (int k = 0; k < np; ++k) {
        A(pairs[k].first, k) = 1.0;
        A(pairs[k].second, k) = 1.0;
    }
    const VecR bvec = VecR::Constant(n, kSingletCorr);
    const MatR AAtInv = (A * A.transpose()).inverse();
    auto project_point = [&](const VecR& c) -> VecR {
        return c - A.transpose() * (AAtInv * (A * c - bvec));
    };
    auto project_dir = [&](const VecR& g) -> VecR {
        return g - A.transpose() * (AAtInv * (A * g));
    };
    auto in_domain = [&](const VecR& c) {
        return (c.array() > -0.25 + 1e-9).all() && (c.array() < 1.0 / 12.0 - 1e-9).all();
    };
    auto objective = [&](const VecR& c) {
        double s = 0.0;
        for (int k = 0; k < np; ++k) s += entropy_isotropic_closed_form(c[k]);
        return s;   // x2 for ordered pairs cancels in the argmax
    };
    auto gradient = [&](const VecR& c) {
        VecR g(np);
        for (int k = 0; k < np; ++k)
            g[k] = 3.0 * std::log2((1.0 - 12.0 * c[k]) / (1.0 + 4.0 * c[k]));
        return g;
    };

    E2vMaximization best;
    best.e2v = -1.0;
    std::mt19937_64 rng(seed);
    for (int s = 0; s < starts; ++s) {
        std::uniform_real_distribution<double> dist(-0.5 / (n - 1), 0.0);
        VecR c(np);
        do {
            for (int k = 0; k < np; ++k) c[k] = dist(rng);
            c = project_point(c);
        } while (!in_domain(c));

        // guarded ascent while function improvements are resolvable
        double f = objective(c);
        int it = 0;
        double gp_norm = 0.0;
        for (; it < 50000; ++it) {
            const VecR gp = project_dir(gradient(c));
            gp_norm = gp.norm();
            if (gp_norm < grad_tol) break;
            double step = 0.02;
            while (step > 1e-16) {
                const VecR cand = c + step * gp;
                if (in_domain(cand)) {
                    const double fc = objective(cand);
                    if (fc > f) {
                        c = cand;
                        f = fc;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (step <= 1e-16) break;
        }
        // fixed-step polish: near the optimum the ascent map is a
        // contraction, which pushes the gradient norm below what
        // function-value comparisons can certify
        for (int polish = 0; polish < 50000 && gp_norm >= grad_tol; ++polish, ++it) {
            const VecR gp = project_dir(gradient(c));
            gp_norm = gp.norm();
            if (gp_norm < grad_tol) break;
            double step = 0.01;
            while (step > 1e-16 && !in_domain(c + step * gp)) step *= 0.5;
            if (step <= 1e-16) break;
            c += step * gp;
        }

        E2vMaximization res;
        res.czz = MatR::Zero(n, n);
        for (int k = 0; k < np; ++k) {
            res.czz(pairs[k].first, pairs[k].second) = c[k];
            res.czz(pairs[k].second, pairs[k].first) = c[k];
        }
        res.e2v = 2.0 * f / (n * (n - 1));
        res.grad_norm = gp_norm;
        res.czz_spread = c.maxCoeff() - c.minCoeff();
        res.converged = gp_norm < grad_tol;
        res.iterations = it;
        if (res.e2v > best.e2v) best = res;
    }
    return best;
}

double iconcurrence(const PureState& state) {
    const int n = state.n_sites();
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const MatC rho = partial_trace(state, {i, j});
            const double purity = (rho * rho).trace().real();
            total += std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
        }
    return total / (0.5 * n * (n - 1));
}

double iconcurrence_max() { return std::sqrt(1.5); }

double iconcurrence_homogeneous(int n_sites) {
    const double c = -1.0 / (4.0 * (n_sites - 1));
    const double purity = 3.0 * (0.25 + c) * (0.25 + c) + (0.25 - 3.0 * c) * (0.25 - 3.0 * c);
    return std::sqrt(2.0 * (1.0 - purity));
}

Eigen::Matrix4cd werner_state(double p) {
    Eigen::Vector4cd singlet = Eigen::Vector4cd::Zero();
    singlet[1] = 1.0 / std::sqrt(2.0);
    singlet[2] = -1.0 / std::sqrt(2.0);
    return p * singlet * singlet.adjoint() +
           (1.0 - p) / 4.0 * Eigen::Matrix4cd::Identity();
}

WernerDecomposition werner_fit(const Eigen::Matrix4cd& rho) {
    // <S_i . S_j> from the pair RDM; the pair space uses bit0 = first site.
    Eigen::Matrix4cd sdots = Eigen::Matrix4cd::Zero();
    sdots(0, 0) = 0.25;
    sdots(3, 3) = 0.25;
    sdots(1, 1) = -0.25;
    sdots(2, 2) = -0.25;
    sdots(1, 2) = 0.5;
    sdots(2, 1) = 0.5;
    const double sdot = (rho * sdots).trace().real();
    WernerDecomposition fit;
    fit.p = -(4.0 / 3.0) * sdot;
    fit.residual = (rho - werner_state(fit.p)).norm();
    return fit;
}

PptResult ppt_separability(const Eigen::Matrix4cd& rho) {
    // partial transpose on the second qubit (bit 1 of the pair index)
    Eigen::Matrix4cd pt;
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b1 = 0; b1 < 2; ++b1)
                    pt(a0 + 2 * a1, b0 + 2 * b1) = rho(a0 + 2 * b1, b0 + 2 * a1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(pt);
    PptResult res;
    res.min_eigenvalue = solver.eigenvalues().minCoeff();
    res.negativity = 0.0;
    for (int k = 0; k < 4; ++k)
        if (solver.eigenvalues()[k] < 0.0) res.negativity -= solver.eigenvalues()[k];
    res.separable = res.min_eigenvalue >= -1e-12;
    return res;
}

} // namespace rvb
