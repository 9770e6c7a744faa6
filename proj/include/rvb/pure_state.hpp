#ifndef RVB_PURE_STATE_HPP
#define RVB_PURE_STATE_HPP

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace rvb {

using Cx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

/// Pure state of n_sites spin-1/2 qubits in the computational z basis.
/// Basis index convention: bit i of the index is site i, bit set = spin up.
class PureState {
public:
    PureState(int n_sites, VecC amplitudes);

    /// |000...0> (all spins down).
    static PureState zero_state(int n_sites);

    int n_sites() const { return n_sites_; }
    Eigen::Index dim() const { return amp_.size(); }
    const VecC& amplitudes() const { return amp_; }
    VecC& amplitudes() { return amp_; }

    double norm() const { return amp_.norm(); }

    /// Rescale to unit norm. Throws std::domain_error on a zero vector.
    PureState& normalize();
    bool is_normalized(double tol = 1e-12) const;

    Cx overlap(const PureState& other) const;

    std::string to_json() const;
    static PureState from_json(const std::string& text);
    static PureState load(const std::string& path);
    void save(const std::string& path) const;

private:
    int n_sites_;
    VecC amp_;
};

inline int site_bit(Eigen::Index basis, int site) {
    return static_cast<int>((basis >> site) & 1);
}

/// S^z eigenvalue of one site in one basis state: +1/2 up, -1/2 down.
inline double sz_of(Eigen::Index basis, int site) {
    return site_bit(basis, site) ? 0.5 : -0.5;
}

} // namespace rvb

#endif
