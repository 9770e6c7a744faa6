#ifndef RVB_PHONON_HPP
#define RVB_PHONON_HPP

#include <array>
#include <string>
#include <vector>

#include "rvb/pure_state.hpp"
#include "rvb/spin_ops.hpp"

namespace rvb {

struct FSeries {
    double f1 = 0.0;
    double f2 = 0.0;
    int terms_used = 0;
};

/// f1(g) = sum_{n>=1} g^{2n}/(n! n) and the double series
/// f2(g) = sum_{n,m>=1} g^{2(n+m)}/[n! m! (n+m)], the latter summed over
/// diagonal shells s = n+m: sum_{s>=2} g^{2s} (2^s - 2)/(s s!).
FSeries f_series(double g, double tolerance = 1e-15);

struct EffectiveCouplings {
    double g = 0.0;
    double omega0 = 0.0;
    double coupling = 0.0;   // bare exchange J
    double j_perp = 0.0;
    double j_par = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    bool in_regime = false;  // strong coupling g > 1 and J/omega0 <= 1
};

/// J_perp = J e^{-g^2} - (N-2) f1 J^2 e^{-2g^2}/(2 w0),
/// J_par  = J + (2 f1 + f2) J^2 e^{-2g^2}/(2 w0).
EffectiveCouplings effective_couplings(int n_sites, double g, double omega0,
                                       double coupling);

/// Spin form of the second-order effective Hamiltonian:
/// sum_{i<j} [J_perp (SxSx + SySy) + J_par SzSz] - g^2 w0 sum_i S^z_i.
OperatorMatrix effective_hamiltonian_2nd(int n_sites, double g, double omega0,
                                         double coupling);

struct CommutatorChecks {
    double szsz_with_irhm = 0.0;
    double sz_total_with_irhm = 0.0;
};

CommutatorChecks commutator_checks(int n_sites);

// ---- hard-core boson algebra on the 2^N occupation-bitmask Fock space ----

/// b_i (annihilation): clears bit i. b_i^dag = transpose.
MatR hcb_annihilation(int site, int n_sites);
MatR hcb_number(int site, int n_sites);
MatR hcb_total_number(int n_sites);
/// sum_{l != i} b^dag_l b_i.
MatR hcb_hopping_sum(int n_sites);

enum class HcbIdentity { T1, T2, T3, T4, T5, T6, V1, V2, V3, TC1, TC2, TC3 };

HcbIdentity hcb_identity_from_string(const std::string& name);
std::string to_string(HcbIdentity id);
std::vector<HcbIdentity> all_hcb_identities();

/// Left side built from the explicit third-order hopping strings for one
/// (l, i) pair (or one site for V identities, where l is ignored).
MatR hcb_identity_lhs(HcbIdentity id, int n_sites, int l, int i);
/// Right side: the number-operator closed form.
MatR hcb_identity_rhs(HcbIdentity id, int n_sites, int l, int i);

/// Max over valid (l, i) pairs of the elementwise LHS-RHS deviation.
double verify_identity(HcbIdentity id, int n_sites);

struct H3Coefficients {
    std::array<double, 6> t{};    // open-loop hopping weights
    std::array<double, 3> v{};    // closed-loop interaction weights
    std::array<double, 3> tc{};   // closed-loop hopping weights
};

/// Schematic magnitude estimates of the third-order coefficients
/// (reported only, never asserted): t ~ J^3 e^{-g^2}/(g^2 w0)^2,
/// v ~ J^3/(g^2 w0)^2, tc ~ J^3 e^{-g^2}/(g w0)^2.
H3Coefficients h3_coefficient_estimates(double g, double omega0, double coupling);

struct H3StructureCheck {
    double number_commutator = 0.0;      // || [H3, sum_k n_k] ||
    double sector_structure_residual = 0.0;
    double half_filled_min_overlap = 0.0; // min over H3 eigvecs of the best
                                          // IRHM eigenspace projection norm
};

/// Assemble H3 from the explicit operator strings with the given weights and
/// test that it is block diagonal in total number and, per sector, equal to
/// T(total) (hopping) + V(total) (number), sharing eigenstates with the IRHM.
H3StructureCheck h3_structure_check(int n_sites, const H3Coefficients& coeffs);

struct LangFirsovCheck {
    double residual = 0.0;        // Frobenius norm of the projected mismatch
    double polaron_shift_error = 0.0;
    Eigen::Index dimension = 0;
};

/// Exact polaron transform on a truncated phonon space: compares
/// e^S H e^{-S} (matrix exponential) against the transformed operator built
/// from displacement-operator formulas, projected onto total phonon
/// occupation <= proj_occupation. The mismatch is a pure truncation artifact
/// and shrinks as the per-site cutoff grows.
LangFirsovCheck lang_firsov_verify(int n_sites, double g, double omega0,
                                   double coupling, int phonon_cutoff,
                                   int proj_occupation = 2);

/// J [ sum_{i<j} (0.5 b^dag_i b_j + h.c. + n_i n_j) ] as a spin-space matrix;
/// equals H_IRHM + J [ (N-1)/2 Sz_total + N(N-1)/8 ].
MatR hcb_heisenberg_matrix(int n_sites, double coupling);

} // namespace rvb

#endif
