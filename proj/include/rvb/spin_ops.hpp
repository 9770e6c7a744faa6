#ifndef RVB_SPIN_OPS_HPP
#define RVB_SPIN_OPS_HPP

#include <string>

#include "rvb/pure_state.hpp"

namespace rvb {

enum class SpinOp { Sx, Sy, Sz, Splus, Sminus };

SpinOp spin_op_from_string(const std::string& name);

/// Apply a single-site spin operator; the image is in general unnormalized.
PureState apply_spin(SpinOp op, int site, const PureState& state);

/// S_i . S_j applied to a state vector (no matrix built).
VecC apply_heisenberg_pair(const VecC& v, int i, int j, int n_sites);

/// Total-spin Casimir (sum_i S_i)^2 applied to a state vector.
VecC apply_s2_total(const VecC& v, int n_sites);

/// Total S^z applied to a state vector (diagonal).
VecC apply_sz_total(const VecC& v, int n_sites);

/// Dense operator with provenance label.
struct OperatorMatrix {
    MatC mat;
    std::string label;

    Eigen::Index dim() const { return mat.rows(); }
    bool is_hermitian(double tol = 1e-12) const {
        return (mat - mat.adjoint()).cwiseAbs().maxCoeff() < tol;
    }
};

/// Dense 2^n matrix of a single-site spin operator.
MatC spin_matrix(SpinOp op, int site, int n_sites);

/// Dense sum_{i<j} S_i . S_j (no coupling prefactor).
MatC heisenberg_all_pairs_matrix(int n_sites);

/// Dense sum_{i<j} S^z_i S^z_j (diagonal).
MatC szsz_all_pairs_matrix(int n_sites);

/// Dense total S^z (diagonal).
MatC sz_total_matrix(int n_sites);

/// Dense (sum_i S_i)^2.
MatC s2_total_matrix(int n_sites);

inline MatC commutator(const MatC& a, const MatC& b) { return a * b - b * a; }

inline double commutator_norm(const MatC& a, const MatC& b) {
    return commutator(a, b).cwiseAbs().maxCoeff();
}

} // namespace rvb

#endif
