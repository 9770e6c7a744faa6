#include "rvb/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rvb/correlations.hpp"
#include "rvb/entanglement.hpp"
#include "rvb/irhm.hpp"
#include "rvb/spin_ops.hpp"

namespace rvb {

void BathSpec::validate() const {
    if (temperature < 0.0)
        throw std::invalid_argument("BathSpec: temperature must be >= 0");
    for (const auto& m : modes)
        if (m.omega <= 0.0)
            throw std::invalid_argument("BathSpec: mode frequencies must be > 0");
}

std::string BathSpec::to_json() const {
    nlohmann::json j;
    j["temperature"] = temperature;
    auto& arr = j["modes"] = nlohmann::json::array();
    for (const auto& m : modes) arr.push_back({{"g", m.g}, {"omega", m.omega}});
    return j.dump();
}

BathSpec BathSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    BathSpec spec;
    spec.temperature = j.at("temperature").get<double>();
    for (const auto& m : j.at("modes"))
        spec.modes.push_back({m.at("g").get<double>(), m.at("omega").get<double>()});
    spec.validate();
    return spec;
}

BathSpec BathSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bath file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

namespace {

double coth_thermal(double omega, double temperature) {
    if (temperature <= 0.0) return 1.0;   // T -> 0 limit
    return 1.0 / std::tanh(omega / (2.0 * temperature));
}

} // namespace

Cx bath_correlation(const BathSpec& spec, double tau) {
    spec.validate();
    double eta = 0.0, nu = 0.0;
    for (const auto& m : spec.modes) {
        const double g2 = m.g * m.g;
        eta += g2 * coth_thermal(m.omega, spec.temperature) * std::cos(m.omega * tau);
        nu -= g2 * std::sin(m.omega * tau);
    }
    return {eta, nu};
}

std::vector<double> default_time_grid(const BathSpec& spec, double t_max) {
    double omega_max = 0.0;
    for (const auto& m : spec.modes) omega_max = std::max(omega_max, m.omega);
    double h = 0.005;
    if (omega_max > 0.0) h = std::min(h, 2.0 * M_PI / (40.0 * omega_max));
    const auto steps = static_cast<size_t>(std::ceil(t_max / h));
    std::vector<double> grid(steps + 1);
    for (size_t k = 0; k <= steps; ++k) grid[k] = t_max * static_cast<double>(k) / steps;
    return grid;
}

namespace {

/// Cumulative integral on a uniform grid: piecewise parabola through each
/// interval pair, with partial integrals to the midpoints (4th order).
template <typename T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
    std::vector<T> out(f.size(), T{});
    for (size_t k = 0; k + 1 < f.size(); k += 2) {
        if (k + 2 < f.size()) {
            out[k + 1] = out[k] + h * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]) / 12.0;
            out[k + 2] = out[k] + h * (f[k] + 4.0 * f[k + 1] + f[k + 2]) / 3.0;
        } else {
            out[k + 1] = out[k] + h * (f[k] + f[k + 1]) / 2.0;
        }
    }
    return out;
}

double interp(const std::vector<double>& ts, const std::vector<double>& vals, double t) {
    if (t <= ts.front()) return vals.front();
    if (t >= ts.back()) return vals.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const size_t hi = static_cast<size_t>(it - ts.begin());
    const size_t lo = hi - 1;
    const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return (1.0 - w) * vals[lo] + w * vals[hi];
}

} // namespace

double DephasingFunctions::x_at(double t) const { return interp(time, x, t); }
double DephasingFunctions::y_at(double t) const { return interp(time, y, t); }

DephasingFunctions xy_functions(const BathSpec& spec, const std::vector<double>& grid) {
    spec.validate();
    if (grid.size() < 3 || grid.front() != 0.0)
        throw std::invalid_argument("xy_functions: grid must start at 0 with >= 3 points");
    const double h = grid[1] - grid[0];
    for (size_t k = 1; k < grid.size(); ++k)
        if (std::abs(grid[k] - grid[k - 1] - h) > 1e-9 * std::max(1.0, h))
            throw std::invalid_argument("xy_functions: grid must be uniform");

    std::vector<Cx> alpha(grid.size());
    for (size_t k = 0; k < grid.size(); ++k) alpha[k] = bath_correlation(spec, grid[k]);
    const std::vector<Cx> f = cumulative_integral(alpha, h);

    std::vector<double> fre(f.size()), fim(f.size());
    for (size_t k = 0; k < f.size(); ++k) {
        fre[k] = f[k].real();
        fim[k] = f[k].imag();
    }
    DephasingFunctions out;
    out.time = grid;
    out.x = cumulative_integral(fre, h);
    out.y = cumulative_integral(fim, h);
    return out;
}

MatC EigenLabeledBasis::to_eigenbasis(const MatC& rho_computational) const {
    return vectors.adjoint() * rho_computational * vectors;
}

MatC EigenLabeledBasis::to_computational(const MatC& rho_eigen) const {
    return vectors * rho_eigen * vectors.adjoint();
}

EigenLabeledBasis irhm_eigenbasis(int n_sites, double coupling) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    EigenLabeledBasis basis;
    basis.n_sites = n_sites;
    basis.coupling = coupling;
    basis.vectors = MatC::Zero(d, d);
    basis.energies = VecR::Zero(d);
    basis.sz_labels = VecR::Zero(d);

    std::map<int, std::vector<Eigen::Index>> sectors;
    std::vector<int> sector_of(d);
    for (Eigen::Index b = 0; b < d; ++b) {
        const int pop = std::popcount(static_cast<unsigned long long>(b));
        sectors[pop].push_back(b);
        sector_of[b] = pop;
    }

    // The solvable master equation needs [L, H_S] = 0; witnessed here by H
    // never leaking amplitude across total-S^z sectors.
    double leakage = 0.0;
    Eigen::Index col = 0;
    for (const auto& [pop, idx] : sectors) {
        const Eigen::Index ds = static_cast<Eigen::Index>(idx.size());
        MatC h(ds, ds);
        for (Eigen::Index c = 0; c < ds; ++c) {
            VecC e = VecC::Zero(d);
            e[idx[c]] = 1.0;
            const VecC hcol = apply_irhm(e, n_sites, coupling);
            for (Eigen::Index r = 0; r < d; ++r)
                if (sector_of[r] != pop) leakage = std::max(leakage, std::abs(hcol[r]));
            for (Eigen::Index r = 0; r < ds; ++r) h(r, c) = hcol[idx[r]];
        }
        Eigen::SelfAdjointEigenSolver<MatC> solver(h);
        for (Eigen::Index k = 0; k < ds; ++k) {
            VecC full = VecC::Zero(d);
            for (Eigen::Index r = 0; r < ds; ++r) full[idx[r]] = solver.eigenvectors()(r, k);
            basis.vectors.col(col) = full;
            basis.energies[col] = solver.eigenvalues()[k];
            basis.sz_labels[col] = pop - 0.5 * n_sites;
            ++col;
        }
    }
    if (leakage > 1e-12)
        throw std::logic_error("irhm_eigenbasis: [Sz_total, H] != 0");
    return basis;
}

MatC evolve_in_eigenbasis(const MatC& rho0_eigen, const EigenLabeledBasis& basis,
                          const DephasingFunctions& funcs, double t) {
    const Eigen::Index d = basis.dim();
    if (rho0_eigen.rows() != d || rho0_eigen.cols() != d)
        throw std::invalid_argument("evolve_in_eigenbasis: dimension mismatch");
    const double x = funcs.x_at(t);
    const double y = funcs.y_at(t);
    MatC out(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
            const double de = basis.energies[a] - basis.energies[b];
            const double la = basis.sz_labels[a], lb = basis.sz_labels[b];
            const double phase = -(de * t + (la * la - lb * lb) * y);
            const double damp = -(la - lb) * (la - lb) * x;
            out(a, b) = std::exp(Cx(damp, phase)) * rho0_eigen(a, b);
        }
    return out;
}

MatC evolve(const MatC& rho0_computational, const EigenLabeledBasis& basis,
            const DephasingFunctions& funcs, double t) {
    const MatC r0 = basis.to_eigenbasis(rho0_computational);
    return basis.to_computational(evolve_in_eigenbasis(r0, basis, funcs, t));
}

DfsInfo dfs_subspace(int n_sites, double coupling, double tol) {
    if (n_sites > 10 || n_sites < 2 || n_sites % 2 != 0)
        throw std::invalid_argument("dfs_subspace: n_sites must be even and <= 10");
    const EigenLabeledBasis basis = irhm_eigenbasis(n_sites, coupling);

    // cluster by l, then by energy gaps well above the diagonalization noise
    std::map<long, std::vector<int>> by_l;
    for (Eigen::Index k = 0; k < basis.dim(); ++k)
        by_l[std::lround(2.0 * basis.sz_labels[k])].push_back(static_cast<int>(k));

    DfsInfo info;
    info.ground_energy = irhm_level_energy(n_sites, coupling, 0.0);
    const double cluster_gap = std::max(1e-6, 1000.0 * tol);
    for (auto& [lkey, idx] : by_l) {
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return basis.energies[a] < basis.energies[b];
        });
        std::vector<int> group;
        for (size_t k = 0; k < idx.size(); ++k) {
            if (!group.empty() &&
                basis.energies[idx[k]] - basis.energies[group.back()] > cluster_gap) {
                info.all_groups.push_back(group);
                group.clear();
            }
            group.push_back(idx[k]);
        }
        if (!group.empty()) info.all_groups.push_back(group);
    }
    for (const auto& group : info.all_groups) {
        const int k0 = group.front();
        if (std::lround(2.0 * basis.sz_labels[k0]) == 0 &&
            std::abs(basis.energies[k0] - info.ground_energy) < cluster_gap)
            info.ground_indices = group;
    }
    return info;
}

RobustnessReport rdm_robustness(const PureState& state, const BathSpec& spec,
                                const std::vector<double>& times, double coupling) {
    const int n = state.n_sites();
    const EigenLabeledBasis basis = irhm_eigenbasis(n, coupling);
    const double t_max = *std::max_element(times.begin(), times.end());
    const DephasingFunctions funcs = xy_functions(spec, default_time_grid(spec, t_max));

    const MatC rho0 = state.amplitudes() * state.amplitudes().adjoint();
    const MatC r0_eigen = basis.to_eigenbasis(rho0);

    std::vector<MatC> rdms0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rdms0.push_back(partial_trace_density(rho0, {i, j}, n));
    const double e2v0 = e2v_average_density(rho0, n);

    RobustnessReport rep;
    for (const double t : times) {
        const MatC rho_t = basis.to_computational(
            evolve_in_eigenbasis(r0_eigen, basis, funcs, t));
        RobustnessRow row;
        row.t = t;
        row.x = funcs.x_at(t);
        row.y = funcs.y_at(t);
        size_t p = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j, ++p) {
                const MatC rdm = partial_trace_density(rho_t, {i, j}, n);
                row.max_rdm_deviation = std::max(
                    row.max_rdm_deviation, (rdm - rdms0[p]).cwiseAbs().maxCoeff());
            }
        row.e2v = e2v_average_density(rho_t, n);
        rep.max_rdm_deviation = std::max(rep.max_rdm_deviation, row.max_rdm_deviation);
        rep.max_e2v_drift = std::max(rep.max_e2v_drift, std::abs(row.e2v - e2v0));
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace rvb
