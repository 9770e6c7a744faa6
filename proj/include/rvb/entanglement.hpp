#ifndef RVB_ENTANGLEMENT_HPP
#define RVB_ENTANGLEMENT_HPP

#include <vector>

#include "rvb/correlations.hpp"
#include "rvb/pure_state.hpp"

namespace rvb {

/// von Neumann entropy in bits, with 0 log 0 = 0. Eigenvalues in
/// [-psd_tol, 0) are clipped to 0; below -psd_tol the input is rejected.
double entropy_vn(const MatC& rho, double psd_tol = 1e-9);

/// Closed-form pair entropy of an isotropic S^z-eigenstate RDM,
/// parameterized by czz = <S^z_i S^z_j>:
///   2 - (1/4)[3(1+4c)log2(1+4c) + (1-12c)log2(1-12c)].
double entropy_isotropic_closed_form(double czz);

/// Mean pair entropy E^2_v: average of E_v(rho_ij) over all site pairs.
double e2v_average(const PureState& state);

/// Same average for a mixed state given as a full density matrix.
double e2v_average_density(const MatC& rho, int n_sites);

/// Maximal E^2_v over isotropic total-S^z = 0 states: the closed form at
/// the homogeneous point czz = -1/(4(N-1)).
double e2v_max(int n_sites);

struct E2vMaximization {
    MatR czz;              // optimal pair correlations (symmetric)
    double e2v = 0.0;
    double grad_norm = 0.0;      // projected gradient norm at the optimum
    double czz_spread = 0.0;     // max - min over pairs
    bool converged = false;
    int iterations = 0;
};

/// Numerically maximize the total pair entropy over the czz variables
/// subject to the row-sum constraint sum_{j != i} czz_ij = -1/4.
/// Projected gradient ascent with multi-start; the objective is strictly
/// concave on the feasible domain, so every start reaches the same optimum.
E2vMaximization maximize_e2v_numeric(int n_sites, int starts = 10,
                                     unsigned long seed = 12345,
                                     double grad_tol = 1e-8);

/// Mean of sqrt(2[1 - Tr rho_ij^2]) over pairs.
double iconcurrence(const PureState& state);

/// i-concurrence of a single maximally mixed pair RDM, the normalizer
/// sqrt(3/2) used for reporting ratios.
double iconcurrence_max();

/// Pair i-concurrence of the homogeneous isotropic state at given N
/// (Werner spectrum with czz = -1/(4(N-1))).
double iconcurrence_homogeneous(int n_sites);

struct WernerDecomposition {
    double p = 0.0;
    double residual = 0.0;   // Frobenius deviation from the Werner form
};

/// Fit p from <S_i . S_j> = -(3/4)p; residual reports non-Werner input.
WernerDecomposition werner_fit(const Eigen::Matrix4cd& rho);

/// Werner state p |singlet><singlet| + (1-p)/4 I.
Eigen::Matrix4cd werner_state(double p);

struct PptResult {
    double min_eigenvalue = 0.0;
    double negativity = 0.0;     // sum of |negative eigenvalues| of rho^T_B
    bool separable = false;      // exact for two qubits
};

PptResult ppt_separability(const Eigen::Matrix4cd& rho);

} // namespace rvb

#endif
