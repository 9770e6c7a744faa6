#ifndef RVB_CORRELATIONS_HPP
#define RVB_CORRELATIONS_HPP

#include <vector>

#include "rvb/pure_state.hpp"

namespace rvb {

/// Pairwise spin correlation functions of a pure state.
/// czz(i,j) = <S^z_i S^z_j>, cpm(i,j) = <S^+_i S^-_j>, sz(i) = <S^z_i>.
struct SpinCorrelations {
    MatR czz;
    MatC cpm;
    VecR sz;
};

SpinCorrelations correlations(const PureState& state);

/// Reduced density matrix over the kept sites of a pure state.
/// Bit k of the reduced index is the k-th smallest kept site.
MatC partial_trace(const PureState& state, const std::vector<int>& keep);

/// Same reduction applied to a full density matrix in the computational basis.
MatC partial_trace_density(const MatC& rho, const std::vector<int>& keep, int n_sites);

struct SzEigencheck {
    bool is_eigenstate = false;
    double eigenvalue = 0.0;   // total S^z of the dominant sector
    double out_of_sector_weight = 1.0;
};

/// Tests whether the state lies in a single total-S^z sector
/// (out-of-sector weight below tol).
SzEigencheck sz_total_eigencheck(const PureState& state, double tol = 1e-10);

/// Two-qubit reduced density matrix assembled from correlation functions,
/// valid for total-S^z eigenstates with <S^z_i> = 0; block structure:
/// diag(1/4+czz, 1/4-czz, 1/4-czz, 1/4+czz) with <S^-_i S^+_j> and
/// <S^+_i S^-_j> on the central off-diagonal.
Eigen::Matrix4cd rdm_from_correlations(const SpinCorrelations& corr, int i, int j);

} // namespace rvb

#endif
