#ifndef RVB_VALENCE_BOND_HPP
#define RVB_VALENCE_BOND_HPP

#include <string>
#include <utility>
#include <vector>

#include "rvb/pure_state.hpp"

namespace rvb {

/// Perfect matching of n sites into n/2 ordered singlet pairs.
/// Pair orientation (a,b) fixes the singlet sign: |up_a down_b> - |down_a up_b>.
struct DimerCovering {
    std::vector<std::pair<int, int>> pairs;

    /// a < b within each pair, pairs sorted by first site. Flipping an
    /// orientation flips the sign of the associated state.
    DimerCovering canonical() const;
    bool is_valid_for(int n_sites) const;
    std::string to_string() const;
};

/// Product of two-spin singlets over the covering, normalized.
PureState dimer_state(const DimerCovering& cov, int n_sites);

/// Unnormalized variant built from (|ud> - |du|) factors without 1/sqrt(2).
VecC dimer_vector_unnormalized(const DimerCovering& cov, int n_sites);

/// All (n-1)!! perfect matchings of {0..n-1}, canonical form.
std::vector<DimerCovering> all_coverings(int n_sites);

/// Non-crossing matchings with sites on a circle 0..n-1.
std::vector<DimerCovering> rumer_coverings(int n_sites);

struct VBBasis {
    int n_sites = 0;
    std::vector<DimerCovering> coverings;
    MatC vectors;   // columns are the normalized covering states
    MatC gram;      // vectors.adjoint() * vectors

    Eigen::Index size() const { return vectors.cols(); }
};

VBBasis make_vb_basis(const std::vector<DimerCovering>& covs, int n_sites);

/// The linearly independent non-crossing (Rumer) basis; size Catalan(n/2).
VBBasis rumer_basis(int n_sites);

/// Numeric rank with a relative singular-value threshold.
int numeric_rank(const MatC& columns, double rel_threshold = 1e-9);

/// Smallest/largest singular value of the column set.
std::pair<double, double> singular_value_range(const MatC& columns);

/// n!/[(n/2)!(n/2+1)!], the count of linearly independent S_T=0 products.
long catalan_count(int n_sites);

/// (n-1)!! covering count.
long double_factorial_count(int n_sites);

struct DependenceCheck {
    /// For n=4: || u - v - w || over the three unnormalized covering vectors
    /// (crossing state minus the two non-crossing ones). For larger n: the
    /// first singular value beyond the expected rank, relative to the largest.
    double residual = 0.0;
    int rank = 0;
    long expected_rank = 0;
};

DependenceCheck dependence_check(int n_sites);

} // namespace rvb

#endif
