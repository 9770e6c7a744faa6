#ifndef RVB_DYNAMICS_HPP
#define RVB_DYNAMICS_HPP

#include <string>
#include <vector>

#include "rvb/pure_state.hpp"

namespace rvb {

struct BathMode {
    double g = 0.0;       // dimensionless coupling
    double omega = 0.0;   // mode frequency, > 0
};

/// Discrete-mode dephasing bath at temperature T (k_B = 1, T = 0 allowed).
struct BathSpec {
    std::vector<BathMode> modes;
    double temperature = 0.0;

    void validate() const;
    std::string to_json() const;
    static BathSpec from_json(const std::string& text);
    static BathSpec load(const std::string& path);
};

/// alpha(tau) = eta + i nu with
/// eta = sum_k g_k^2 coth(w_k/2T) cos(w_k tau), nu = -sum_k g_k^2 sin(w_k tau).
Cx bath_correlation(const BathSpec& spec, double tau);

/// X(t) and Y(t) on a uniform time grid: F(t) = int_0^t alpha, then
/// X = int_0^t Re F and Y = int_0^t Im F, both by composite quadrature.
struct DephasingFunctions {
    std::vector<double> time;
    std::vector<double> x;
    std::vector<double> y;

    double x_at(double t) const;   // linear interpolation between nodes
    double y_at(double t) const;
};

/// Uniform grid 0..t_max with step at most min(0.005, 2 pi / (40 max w_k)).
std::vector<double> default_time_grid(const BathSpec& spec, double t_max);

DephasingFunctions xy_functions(const BathSpec& spec,
                                const std::vector<double>& grid);

/// Simultaneous eigenbasis of the IRHM and total S^z, built sector by
/// sector so the S^z labels are exact.
struct EigenLabeledBasis {
    int n_sites = 0;
    double coupling = 0.0;
    MatC vectors;           // columns, orthonormal
    VecR energies;
    VecR sz_labels;

    Eigen::Index dim() const { return vectors.cols(); }
    MatC to_eigenbasis(const MatC& rho_computational) const;
    MatC to_computational(const MatC& rho_eigen) const;
};

EigenLabeledBasis irhm_eigenbasis(int n_sites, double coupling);

/// Closed-form dephasing propagation of the density matrix in the labeled
/// eigenbasis:
/// rho_ab(t) = exp(-i[(E_a-E_b)t + (l_a^2-l_b^2)Y]) exp(-(l_a-l_b)^2 X) rho_ab(0).
MatC evolve_in_eigenbasis(const MatC& rho0_eigen, const EigenLabeledBasis& basis,
                          const DephasingFunctions& funcs, double t);

/// Same evolution with input/output in the computational basis.
MatC evolve(const MatC& rho0_computational, const EigenLabeledBasis& basis,
            const DephasingFunctions& funcs, double t);

struct DfsInfo {
    std::vector<int> ground_indices;       // eigenbasis columns of the DFS
    double ground_energy = 0.0;
    std::vector<std::vector<int>> all_groups;   // every equal-(E,l) family
};

/// Groups eigenvectors by equal (E, l); the decoherence-free subspace
/// containing the ground manifold has dimension Catalan(N/2).
DfsInfo dfs_subspace(int n_sites, double coupling, double tol = 1e-9);

struct RobustnessRow {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double e2v = 0.0;
    double max_rdm_deviation = 0.0;
};

struct RobustnessReport {
    std::vector<RobustnessRow> rows;
    double max_rdm_deviation = 0.0;   // over all pairs and times
    double max_e2v_drift = 0.0;
};

/// Evolve a pure initial state under the dephasing bath and track every
/// pair RDM against its t = 0 value, together with E^2_v(t).
RobustnessReport rdm_robustness(const PureState& state, const BathSpec& spec,
                                const std::vector<double>& times,
                                double coupling);

} // namespace rvb

#endif
