#include "rvb/valence_bond.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace rvb {

DimerCovering DimerCovering::canonical() const {
    DimerCovering c = *this;
    for (auto& [a, b] : c.pairs)
        if (a > b) std::swap(a, b);
    std::sort(c.pairs.begin(), c.pairs.end());
    return c;
}

bool DimerCovering::is_valid_for(int n_sites) const {
    if (static_cast<int>(pairs.size()) * 2 != n_sites) return false;
    std::vector<bool> seen(n_sites, false);
    for (const auto& [a, b] : pairs) {
        if (a < 0 || b < 0 || a >= n_sites || b >= n_sites || a == b) return false;
        if (seen[a] || seen[b]) return false;
        seen[a] = seen[b] = true;
    }
    return true;
}

std::string DimerCovering::to_string() const {
    std::ostringstream os;
    for (const auto& [a, b] : pairs) os << "(" << a << "," << b << ")";
    return os.str();
}

VecC dimer_vector_unnormalized(const DimerCovering& cov, int n_sites) {
    if (!cov.is_valid_for(n_sites))
        throw std::invalid_argument("dimer state: covering is not a perfect matching of " +
                                    std::to_string(n_sites) + " sites");
    const size_t k = cov.pairs.size();
    VecC v = VecC::Zero(Eigen::Index{1} << n_sites);
    for (size_t sel = 0; sel < (size_t{1} << k); ++sel) {
        Eigen::Index idx = 0;
        double sign = 1.0;
        for (size_t m = 0; m < k; ++m) {
            const auto& [a, b] = cov.pairs[m];
            if ((sel >> m) & 1) {
                idx |= Eigen::Index{1} << b;   // down_a up_b branch
                sign = -sign;
            } else {
                idx |= Eigen::Index{1} << a;   // up_a down_b branch
            }
        }
        v[idx] += sign;
    }
    return v;
}

PureState dimer_state(const DimerCovering& cov, int n_sites) {
    PureState s(n_sites, dimer_vector_unnormalized(cov, n_sites));
    return s.normalize();
}

namespace {

void enumerate_matchings(std::vector<int>& sites, std::vector<std::pair<int, int>>& acc,
                         std::vector<DimerCovering>& out) {
    if (sites.empty()) {
        out.push_back(DimerCovering{acc});
        return;
    }
    const int a = sites.front();
    for (size_t k = 1; k < sites.size(); ++k) {
        const int b = sites[k];
        std::vector<int> rest;
        rest.reserve(sites.size() - 2);
        for (size_t m = 1; m < sites.size(); ++m)
            if (m != k) rest.push_back(sites[m]);
        acc.emplace_back(a, b);
        enumerate_matchings(rest, acc, out);
        acc.pop_back();
    }
}

bool crossing(const std::pair<int, int>& p, const std::pair<int, int>& q) {
    const auto [a, b] = p;
    const auto [c, d] = q;
    return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

} // namespace

std::vector<DimerCovering> all_coverings(int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw std::invalid_argument("all_coverings: n_sites must be even and >= 2");
    std::vector<int> sites(n_sites);
    std::iota(sites.begin(), sites.end(), 0);
    std::vector<DimerCovering> out;
    std::vector<std::pair<int, int>> acc;
    enumerate_matchings(sites, acc, out);
    return out;
}

std::vector<DimerCovering> rumer_coverings(int n_sites) {
    std::vector<DimerCovering> out;
    for (const auto& cov : all_coverings(n_sites)) {
        bool ok = true;
        for (size_t i = 0; i < cov.pairs.size() && ok; ++i)
            for (size_t j = i + 1; j < cov.pairs.size() && ok; ++j)
                if (crossing(cov.pairs[i], cov.pairs[j])) ok = false;
        if (ok) out.push_back(cov);
    }
    return out;
}

VBBasis make_vb_basis(const std::vector<DimerCovering>& covs, int n_sites) {
    VBBasis basis;
    basis.n_sites = n_sites;
    basis.coverings = covs;
    basis.vectors = MatC::Zero(Eigen::Index{1} << n_sites,
                               static_cast<Eigen::Index>(covs.size()));
    for (size_t c = 0; c < covs.size(); ++c)
        basis.vectors.col(static_cast<Eigen::Index>(c)) =
            dimer_state(covs[c], n_sites).amplitudes();
    basis.gram = basis.vectors.adjoint() * basis.vectors;
    return basis;
}

VBBasis rumer_basis(int n_sites) {
    return make_vb_basis(rumer_coverings(n_sites), n_sites);
}

int numeric_rank(const MatC& columns, double rel_threshold) {
    Eigen::JacobiSVD<MatC> svd(columns);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cut = rel_threshold * sv[0];
    int r = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv[k] > cut) ++r;
    return r;
}

std::pair<double, double> singular_value_range(const MatC& columns) {
    Eigen::JacobiSVD<MatC> svd(columns);
    const auto& sv = svd.singularValues();
    return {sv[sv.size() - 1], sv[0]};
}

long catalan_count(int n_sites) {
    const int h = n_sites / 2;
    long num = 1;
    for (int k = 0; k < h; ++k) num = num * (h + 1 + k) / (k + 1);   // C(2h, h)
    return num / (h + 1);
}

long double_factorial_count(int n_sites) {
    long out = 1;
    for (int k = n_sites - 1; k > 0; k -= 2) out *= k;
    return out;
}

DependenceCheck dependence_check(int n_sites) {
    if (n_sites < 2 || n_sites % 2 != 0)
        throw std::invalid_argument("dependence_check: n_sites must be even and >= 2");
    DependenceCheck res;
    res.expected_rank = catalan_count(n_sites);

    const auto covs = all_coverings(n_sites);
    const VBBasis basis = make_vb_basis(covs, n_sites);
    res.rank = numeric_rank(basis.vectors);

    if (n_sites == 4) {
        // crossing covering equals the sum of the two non-crossing ones
        const VecC u = dimer_vector_unnormalized({{{0, 2}, {1, 3}}}, 4);
        const VecC v = dimer_vector_unnormalized({{{0, 1}, {2, 3}}}, 4);
        const VecC w = dimer_vector_unnormalized({{{0, 3}, {1, 2}}}, 4);
        res.residual = (u - v - w).norm();
    } else if (n_sites == 2) {
        res.residual = 0.0;
    } else {
        Eigen::JacobiSVD<MatC> svd(basis.vectors);
        const auto& sv = svd.singularValues();
        res.residual = (res.expected_rank < sv.size())
                           ? sv[res.expected_rank] / sv[0]
                           : 0.0;
    }
    return res;
}

} // namespace rvb
