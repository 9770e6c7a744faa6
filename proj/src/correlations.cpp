#include "rvb/correlations.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace rvb {

SpinCorrelations correlations(const PureState& state) {
    const int n = state.n_sites();
    const VecC& v = state.amplitudes();
    SpinCorrelations c;
    c.czz = MatR::Zero(n, n);
    c.cpm = MatC::Zero(n, n);
    c.sz = VecR::Zero(n);

    for (Eigen::Index b = 0; b < v.size(); ++b) {
        const double p = std::norm(v[b]);
        if (p == 0.0) continue;
        for (int i = 0; i < n; ++i) {
            const double si = sz_of(b, i);
            c.sz[i] += p * si;
            c.czz(i, i) += p * 0.25;
            for (int j = i + 1; j < n; ++j)
                c.czz(i, j) += p * si * sz_of(b, j);
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            c.czz(j, i) = c.czz(i, j);

    // <S+_i S-_j>: for i != j sums conj(amp[b with i up, j down]) * amp[b]
    // over b with j up, i down; on the diagonal it is the up-occupation.
    for (Eigen::Index b = 0; b < v.size(); ++b) {
        const Cx a = v[b];
        if (a == Cx(0.0)) continue;
        const double p = std::norm(a);
        for (int i = 0; i < n; ++i)
            if (site_bit(b, i)) c.cpm(i, i) += p;
        for (int j = 0; j < n; ++j) {
            if (!site_bit(b, j)) continue;
            for (int i = 0; i < n; ++i) {
                if (i == j || site_bit(b, i)) continue;
                const Eigen::Index b2 = (b & ~(Eigen::Index{1} << j)) | (Eigen::Index{1} << i);
                c.cpm(i, j) += std::conj(v[b2]) * a;
            }
        }
    }
    return c;
}

MatC partial_trace(const PureState& state, const std::vector<int>& keep) {
    const int n = state.n_sites();
    std::vector<int> k = keep;
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    if (k.empty() || static_cast<int>(k.size()) >= n)
        throw std::invalid_argument("partial_trace: keep set must be a nonempty strict subset");
    for (int s : k)
        if (s < 0 || s >= n) throw std::out_of_range("partial_trace: site out of range");

    std::vector<int> rest;
    for (int s = 0; s < n; ++s)
        if (!std::binary_search(k.begin(), k.end(), s)) rest.push_back(s);

    const Eigen::Index dk = Eigen::Index{1} << k.size();
    const Eigen::Index dr = Eigen::Index{1} << rest.size();
    MatC amp = MatC::Zero(dk, dr);
    const VecC& v = state.amplitudes();
    for (Eigen::Index b = 0; b < v.size(); ++b) {
        if (v[b] == Cx(0.0)) continue;
        Eigen::Index ik = 0, ir = 0;
        for (size_t m = 0; m < k.size(); ++m) ik |= Eigen::Index{site_bit(b, k[m])} << m;
        for (size_t m = 0; m < rest.size(); ++m) ir |= Eigen::Index{site_bit(b, rest[m])} << m;
        amp(ik, ir) = v[b];
    }
    return amp * amp.adjoint();
}

MatC partial_trace_density(const MatC& rho, const std::vector<int>& keep, int n_sites) {
    std::vector<int> k = keep;
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    if (k.empty() || static_cast<int>(k.size()) >= n_sites)
        throw std::invalid_argument("partial_trace_density: keep set must be a nonempty strict subset");
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    if (rho.rows() != d || rho.cols() != d)
        throw std::invalid_argument("partial_trace_density: dimension mismatch");

    std::vector<int> rest;
    for (int s = 0; s < n_sites; ++s)
        if (!std::binary_search(k.begin(), k.end(), s)) rest.push_back(s);

    const Eigen::Index dk = Eigen::Index{1} << k.size();
    const Eigen::Index dr = Eigen::Index{1} << rest.size();
    auto compose = [&](Eigen::Index ik, Eigen::Index ir) {
        Eigen::Index b = 0;
        for (size_t m = 0; m < k.size(); ++m)
            if ((ik >> m) & 1) b |= Eigen::Index{1} << k[m];
        for (size_t m = 0; m < rest.size(); ++m)
            if ((ir >> m) & 1) b |= Eigen::Index{1} << rest[m];
        return b;
    };
    MatC out = MatC::Zero(dk, dk);
    for (Eigen::Index a = 0; a < dk; ++a)
        for (Eigen::Index b = 0; b < dk; ++b)
            for (Eigen::Index r = 0; r < dr; ++r)
                out(a, b) += rho(compose(a, r), compose(b, r));
    return out;
}

SzEigencheck sz_total_eigencheck(const PureState& state, double tol) {
    const int n = state.n_sites();
    const VecC& v = state.amplitudes();
    std::vector<double> weight(n + 1, 0.0);
    for (Eigen::Index b = 0; b < v.size(); ++b)
        weight[static_cast<size_t>(std::popcount(static_cast<unsigned long long>(b)))] += std::norm(v[b]);
    int best = 0;
    for (int k = 1; k <= n; ++k)
        if (weight[k] > weight[best]) best = k;
    SzEigencheck res;
    res.out_of_sector_weight = 1.0 - weight[best];
    res.is_eigenstate = res.out_of_sector_weight <= tol;
    res.eigenvalue = best - 0.5 * n;
    return res;
}

Eigen::Matrix4cd rdm_from_correlations(const SpinCorrelations& corr, int i, int j) {
    const double czz = corr.czz(i, j);
    Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
    rho(0, 0) = 0.25 + czz;
    rho(3, 3) = 0.25 + czz;
    rho(1, 1) = 0.25 - czz;
    rho(2, 2) = 0.25 - czz;
    // reduced index: bit0 = site i, bit1 = site j
    rho(1, 2) = std::conj(corr.cpm(i, j));   // <S-_i S+_j>
    rho(2, 1) = corr.cpm(i, j);              // <S+_i S-_j>
    return rho;
}

} // namespace rvb
