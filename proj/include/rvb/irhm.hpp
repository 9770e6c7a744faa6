#ifndef RVB_IRHM_HPP
#define RVB_IRHM_HPP

#include <optional>
#include <string>
#include <vector>

#include "rvb/pure_state.hpp"
#include "rvb/spin_ops.hpp"
#include "rvb/valence_bond.hpp"

namespace rvb {

/// J for which the energy per site stays finite as N grows.
inline double irhm_default_coupling(int n_sites) { return 1.0 / (n_sites - 1); }

/// H = J sum_{i<j} S_i . S_j, every pair coupled equally.
OperatorMatrix irhm_hamiltonian(int n_sites, double coupling);

/// Level energy (J/2)[S(S+1) - 3N/4].
double irhm_level_energy(int n_sites, double coupling, double total_spin);

/// H applied to a vector without building the matrix.
VecC apply_irhm(const VecC& v, int n_sites, double coupling);

struct IrhmLevel {
    double total_spin = 0.0;
    double energy = 0.0;
    long degeneracy = 0;
};

struct IrhmSpectrum {
    int n_sites = 0;
    double coupling = 0.0;
    std::vector<IrhmLevel> levels;       // ascending in total spin
    double max_match_error = 0.0;        // worst |eigenvalue - formula|
};

/// Dense diagonalization inside each total-S^z sector; every eigenvalue is
/// matched to a total-spin level. Throws if any eigenvalue fails to match.
IrhmSpectrum spectrum_check(int n_sites, double coupling, double tol = 1e-9);

/// Multiplicity of total spin S for N spin-1/2 sites:
/// C(N, N/2 - S) - C(N, N/2 - S - 1) multiplets.
long spin_multiplet_count(int n_sites, double total_spin);

/// || H|cov> - E0|cov> || with E0 the S_T=0 level energy.
double dimer_eigencheck(const DimerCovering& cov, int n_sites, double coupling);

/// || [S1.S3 + S2.S4 + S1.S4 + S2.S3] |(12)(34)> || on four sites.
double annihilation_identity_residual();

enum class NamedState { HS, PSI6A, PSI6B };

NamedState named_state_from_string(const std::string& name);
std::string to_string(NamedState name);

/// Explicit maximal-E^2_v states: the four-qubit HS state and the two
/// six-qubit resonance hybrids, defined by their amplitude expansions.
PureState build_named_state(NamedState name);

/// The same states as phased superpositions of singlet-product coverings
/// (equal to build_named_state up to global phase).
PureState named_state_superposition_form(NamedState name);

struct HomogenizedState {
    explicit HomogenizedState(PureState s) : state(std::move(s)) {}

    VecC coeffs;                 // over the supplied basis columns
    PureState state;
    double residual = 0.0;       // max over pairs |czz_ij + 1/(4(N-1))|
    bool converged = false;
    int restarts_used = 0;
    int iterations = 0;
};

struct HomogenizeOptions {
    double tolerance = 1e-6;
    int max_restarts = 20;
    int max_iterations = 400;
    unsigned long seed = 12345;
};

/// Find coefficients over a linearly independent S_T=0 basis such that all
/// pair correlations equal -1/(4(N-1)). Levenberg-Marquardt on the pair
/// residuals with analytic Jacobian and seeded random restarts. On failure
/// the best residual found is reported with converged = false.
HomogenizedState homogenize(int n_sites, const VBBasis& basis,
                            const HomogenizeOptions& opts = {});

} // namespace rvb

#endif
