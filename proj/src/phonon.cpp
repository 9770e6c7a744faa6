#include "rvb/phonon.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rvb/irhm.hpp"

namespace rvb {

FSeries f_series(double g, double tolerance) {
    if (g < 0.0) throw std::invalid_argument("f_series: g must be >= 0");
    if (tolerance <= 0.0) throw std::invalid_argument("f_series: tolerance must be > 0");
    FSeries out;
    if (g == 0.0) return out;

    const double g2 = g * g;
    double term = g2;   // n = 1 term, g^{2n}/(n! n)
    int n = 1;
    while (true) {
        out.f1 += term;
        if (n > 2 && term < tolerance * out.f1) break;
        if (++n > 500) throw std::runtime_error("f_series: f1 did not converge");
        term *= g2 * (n - 1.0) / (static_cast<double>(n) * n);
    }
    out.terms_used = n;

    // f2 summed over diagonal shells s = n + m:
    // sum_{n+m=s} 1/(n! m!) = (2^s - 2)/s!, so each shell is
    // g^{2s} (2^s - 2)/(s s!).
    int s = 2;
    double shell = g2 * g2 * 0.5;   // (2^2 - 2)/(2 * 2!) = 1/2
    double pow2 = 4.0;
    while (true) {
        out.f2 += shell;
        if (s > 4 && shell < tolerance * out.f2) break;
        if (++s > 500) throw std::runtime_error("f_series: f2 did not converge");
        const double pow2next = 2.0 * pow2;
        shell *= g2 * (pow2next - 2.0) / (pow2 - 2.0) * (s - 1.0) /
                 (static_cast<double>(s) * s);
        pow2 = pow2next;
    }
    out.terms_used = std::max(out.terms_used, s);
    return out;
}

EffectiveCouplings effective_couplings(int n_sites, double g, double omega0,
                                       double coupling) {
    if (omega0 <= 0.0) throw std::invalid_argument("effective_couplings: omega0 must be > 0");
    const FSeries f = f_series(g);
    EffectiveCouplings c;
    c.g = g;
    c.omega0 = omega0;
    c.coupling = coupling;
    c.f1 = f.f1;
    c.f2 = f.f2;
    const double e = std::exp(-g * g);
    const double second = coupling * coupling * e * e / (2.0 * omega0);
    c.j_perp = coupling * e - (n_sites - 2) * f.f1 * second;
    c.j_par = coupling + (2.0 * f.f1 + f.f2) * second;
    c.in_regime = g > 1.0 && coupling / omega0 <= 1.0;
    return c;
}

OperatorMatrix effective_hamiltonian_2nd(int n_sites, double g, double omega0,
                                         double coupling) {
    const EffectiveCouplings c = effective_couplings(n_sites, g, omega0, coupling);
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatC h = MatC::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
        double diag = 0.0;
        for (int i = 0; i < n_sites; ++i) {
            diag -= g * g * omega0 * sz_of(b, i);
            for (int j = i + 1; j < n_sites; ++j) {
                diag += c.j_par * sz_of(b, i) * sz_of(b, j);
                if (site_bit(b, i) != site_bit(b, j))
                    h(b ^ (Eigen::Index{1} << i) ^ (Eigen::Index{1} << j), b) += 0.5 * c.j_perp;
            }
        }
        h(b, b) += diag;
    }
    OperatorMatrix op;
    op.mat = std::move(h);
    op.label = "H_e(2nd) N=" + std::to_string(n_sites);
    return op;
}

CommutatorChecks commutator_checks(int n_sites) {
    if (n_sites > 10)
        throw std::invalid_argument("commutator_checks: n_sites must be <= 10");
    const MatC h = irhm_hamiltonian(n_sites, irhm_default_coupling(n_sites)).mat;
    CommutatorChecks res;
    res.szsz_with_irhm = commutator_norm(szsz_all_pairs_matrix(n_sites), h);
    res.sz_total_with_irhm = commutator_norm(sz_total_matrix(n_sites), h);
    return res;
}

// ---- hard-core boson machinery ----

MatR hcb_annihilation(int site, int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatR b = MatR::Zero(d, d);
    const Eigen::Index mask = Eigen::Index{1} << site;
    for (Eigen::Index s = 0; s < d; ++s)
        if (s & mask) b(s & ~mask, s) = 1.0;
    return b;
}

MatR hcb_number(int site, int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatR n = MatR::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s)
        if (site_bit(s, site)) n(s, s) = 1.0;
    return n;
}

MatR hcb_total_number(int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatR n = MatR::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s)
        n(s, s) = std::popcount(static_cast<unsigned long long>(s));
    return n;
}

MatR hcb_hopping_sum(int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatR h = MatR::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s)
        for (int i = 0; i < n_sites; ++i) {
            if (!site_bit(s, i)) continue;
            for (int l = 0; l < n_sites; ++l) {
                if (l == i || site_bit(s, l)) continue;
                h((s & ~(Eigen::Index{1} << i)) | (Eigen::Index{1} << l), s) += 1.0;
            }
        }
    return h;
}

namespace {

struct HopFactor {
    bool dagger;
    int site;
};

// Apply a product of b/b^dag factors (rightmost first) to a basis state.
// Returns false when the string annihilates it; the coefficient is always 1.
bool apply_hcb_string(const std::vector<HopFactor>& ops, Eigen::Index s, Eigen::Index& out) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        const Eigen::Index mask = Eigen::Index{1} << it->site;
        if (it->dagger) {
            if (s & mask) return false;
            s |= mask;
        } else {
            if (!(s & mask)) return false;
            s &= ~mask;
        }
    }
    out = s;
    return true;
}

void add_string(MatR& m, const std::vector<HopFactor>& ops) {
    for (Eigen::Index s = 0; s < m.cols(); ++s) {
        Eigen::Index t;
        if (apply_hcb_string(ops, s, t)) m(t, s) += 1.0;
    }
}

} // namespace

HcbIdentity hcb_identity_from_string(const std::string& name) {
    static const std::map<std::string, HcbIdentity> table = {
        {"T1", HcbIdentity::T1},   {"T2", HcbIdentity::T2},
        {"T3", HcbIdentity::T3},   {"T4", HcbIdentity::T4},
        {"T5", HcbIdentity::T5},   {"T6", HcbIdentity::T6},
        {"V1", HcbIdentity::V1},   {"V2", HcbIdentity::V2},
        {"V3", HcbIdentity::V3},   {"TC1", HcbIdentity::TC1},
        {"TC2", HcbIdentity::TC2}, {"TC3", HcbIdentity::TC3},
    };
    const auto it = table.find(name);
    if (it == table.end())
        throw std::invalid_argument("unknown identity: " + name);
    return it->second;
}

std::string to_string(HcbIdentity id) {
    switch (id) {
    case HcbIdentity::T1: return "T1";
    case HcbIdentity::T2: return "T2";
    case HcbIdentity::T3: return "T3";
    case HcbIdentity::T4: return "T4";
    case HcbIdentity::T5: return "T5";
    case HcbIdentity::T6: return "T6";
    case HcbIdentity::V1: return "V1";
    case HcbIdentity::V2: return "V2";
    case HcbIdentity::V3: return "V3";
    case HcbIdentity::TC1: return "TC1";
    case HcbIdentity::TC2: return "TC2";
    case HcbIdentity::TC3: return "TC3";
    }
    return "?";
}

std::vector<HcbIdentity> all_hcb_identities() {
    return {HcbIdentity::T1,  HcbIdentity::T2,  HcbIdentity::T3,
            HcbIdentity::T4,  HcbIdentity::T5,  HcbIdentity::T6,
            HcbIdentity::V1,  HcbIdentity::V2,  HcbIdentity::V3,
            HcbIdentity::TC1, HcbIdentity::TC2, HcbIdentity::TC3};
}

MatR hcb_identity_lhs(HcbIdentity id, int n_sites, int l, int i) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatR m = MatR::Zero(d, d);
    const int N = n_sites;
    auto both = [&](int a, int b, int x) { return x == a || x == b; };

    switch (id) {
    case HcbIdentity::T1:
        for (int j = 0; j < N; ++j) {
            if (both(i, l, j)) continue;
            for (int k = 0; k < N; ++k) {
                if (both(i, l, k) || k == j) continue;
                add_string(m, {{true, l}, {false, k}, {true, k}, {false, j}, {true, j}, {false, i}});
            }
        }
        break;
    case HcbIdentity::T2:
        for (int j = 0; j < N; ++j) {
            if (both(i, l, j)) continue;
            for (int k = 0; k < N; ++k) {
                if (both(i, l, k) || k == j) continue;
                add_string(m, {{true, j}, {false, i}, {true, l}, {false, k}, {true, k}, {false, j}});
            }
        }
        break;
    case HcbIdentity::T3:
        for (int j = 0; j < N; ++j) {
            if (both(i, l, j)) continue;
            for (int k = 0; k < N; ++k) {
                if (both(i, l, k) || k == j) continue;
                add_string(m, {{true, l}, {false, k}, {true, j}, {false, i}, {true, k}, {false, j}});
            }
        }
        break;
    case HcbIdentity::T4:
        for (int k = 0; k < N; ++k) {
            if (both(i, l, k)) continue;
            for (int j = 0; j < N; ++j) {
                if (both(i, l, j) || j == k) continue;
                add_string(m, {{true, k}, {false, j}, {true, j}, {false, i}, {true, l}, {false, k}});
            }
        }
        break;
    case HcbIdentity::T5:
        for (int k = 0; k < N; ++k) {
            if (both(i, l, k)) continue;
            for (int j = 0; j < N; ++j) {
                if (both(i, l, j) || j == k) continue;
                add_string(m, {{true, k}, {false, j}, {true, l}, {false, k}, {true, j}, {false, i}});
            }
        }
        break;
    case HcbIdentity::T6:
        for (int j = 0; j < N; ++j) {
            if (both(i, l, j)) continue;
            for (int k = 0; k < N; ++k) {
                if (both(i, l, k) || k == j) continue;
                add_string(m, {{true, j}, {false, i}, {true, k}, {false, j}, {true, l}, {false, k}});
            }
        }
        break;
    case HcbIdentity::V1:
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            for (int k = 0; k < N; ++k) {
                if (k == i || k == j) continue;
                add_string(m, {{true, i}, {false, k}, {true, k}, {false, j}, {true, j}, {false, i}});
            }
        }
        break;
    case HcbIdentity::V2:
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            for (int k = 0; k < N; ++k) {
                if (k == i || k == j) continue;
                add_string(m, {{true, i}, {false, k}, {true, j}, {false, i}, {true, k}, {false, j}});
            }
        }
        break;
    case HcbIdentity::V3:
        for (int k = 0; k < N; ++k) {
            if (k == i) continue;
            for (int j = 0; j < N; ++j) {
                if (j == i || j == k) continue;
                add_string(m, {{true, k}, {false, j}, {true, i}, {false, k}, {true, j}, {false, i}});
            }
        }
        break;
    case HcbIdentity::TC1:
        for (int j = 0; j < N; ++j) {
            if (both(i, l, j)) continue;
            add_string(m, {{true, l}, {false, i}, {true, i}, {false, j}, {true, j}, {false, i}});
        }
        break;
    case HcbIdentity::TC2:
        for (int k = 0; k < N; ++k) {
            if (both(i, l, k)) continue;
            add_string(m, {{true, l}, {false, k}, {true, k}, {false, l}, {true, l}, {false, i}});
        }
        break;
    case HcbIdentity::TC3:
        add_string(m, {{true, l}, {false, i}, {true, i}, {false, l}, {true, l}, {false, i}});
        break;
    }
    return m;
}

MatR hcb_identity_rhs(HcbIdentity id, int n_sites, int l, int i) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    const int N = n_sites;
    MatR m = MatR::Zero(d, d);
    const bool interaction = (id == HcbIdentity::V1 || id == HcbIdentity::V2 ||
                              id == HcbIdentity::V3);
    auto poly = [&](double nu) -> double {
        switch (id) {
        case HcbIdentity::T1: return (N - 1 - nu) * (N - 2 - nu);
        case HcbIdentity::T2:
        case HcbIdentity::T3:
        case HcbIdentity::T4:
        case HcbIdentity::T5: return (nu - 1) * (N - 1 - nu);
        case HcbIdentity::T6: return (nu - 1) * (nu - 2);
        case HcbIdentity::V1: return (N - nu) * (N - 1 - nu);
        case HcbIdentity::V2:
        case HcbIdentity::V3: return (nu - 1) * (N - nu);
        case HcbIdentity::TC1:
        case HcbIdentity::TC2: return N - 1 - nu;
        case HcbIdentity::TC3: return 1.0;
        }
        return 0.0;
    };
    for (Eigen::Index s = 0; s < d; ++s) {
        const double nu = std::popcount(static_cast<unsigned long long>(s));
        if (interaction) {
            if (site_bit(s, i)) m(s, s) = poly(nu);
        } else {
            Eigen::Index t;
            if (apply_hcb_string({{true, l}, {false, i}}, s, t)) m(t, s) = poly(nu);
        }
    }
    return m;
}

double verify_identity(HcbIdentity id, int n_sites) {
    if (n_sites < 4 || n_sites > 8)
        throw std::invalid_argument("verify_identity: n_sites must be in [4, 8]");
    const bool interaction = (id == HcbIdentity::V1 || id == HcbIdentity::V2 ||
                              id == HcbIdentity::V3);
    double worst = 0.0;
    for (int i = 0; i < n_sites; ++i) {
        if (interaction) {
            worst = std::max(worst, (hcb_identity_lhs(id, n_sites, 0, i) -
                                     hcb_identity_rhs(id, n_sites, 0, i))
                                        .cwiseAbs()
                                        .maxCoeff());
            continue;
        }
        for (int l = 0; l < n_sites; ++l) {
            if (l == i) continue;
            worst = std::max(worst, (hcb_identity_lhs(id, n_sites, l, i) -
                                     hcb_identity_rhs(id, n_sites, l, i))
                                        .cwiseAbs()
                                        .maxCoeff());
        }
    }
    return worst;
}

H3Coefficients h3_coefficient_estimates(double g, double omega0, double coupling) {
    H3Coefficients c;
    const double j3 = coupling * coupling * coupling;
    const double open = j3 * std::exp(-g * g) / std::pow(g * g * omega0, 2);
    const double inter = j3 / std::pow(g * g * omega0, 2);
    const double closed = j3 * std::exp(-g * g) / std::pow(g * omega0, 2);
    c.t.fill(open);
    c.v.fill(inter);
    c.tc.fill(closed);
    return c;
}

H3StructureCheck h3_structure_check(int n_sites, const H3Coefficients& coeffs) {
    if (n_sites < 4 || n_sites > 6)
        throw std::invalid_argument("h3_structure_check: n_sites must be in [4, 6]");
    const int N = n_sites;
    const Eigen::Index d = Eigen::Index{1} << N;

    const std::array<HcbIdentity, 6> topen = {HcbIdentity::T1, HcbIdentity::T2,
                                              HcbIdentity::T3, HcbIdentity::T4,
                                              HcbIdentity::T5, HcbIdentity::T6};
    const std::array<HcbIdentity, 3> tclosed = {HcbIdentity::TC1, HcbIdentity::TC2,
                                                HcbIdentity::TC3};
    const std::array<HcbIdentity, 3> vids = {HcbIdentity::V1, HcbIdentity::V2,
                                             HcbIdentity::V3};

    MatR h3 = MatR::Zero(d, d);
    for (int i = 0; i < N; ++i) {
        for (int l = 0; l < N; ++l) {
            if (l == i) continue;
            for (size_t n = 0; n < topen.size(); ++n)
                h3 += coeffs.t[n] * hcb_identity_lhs(topen[n], N, l, i);
            for (size_t n = 0; n < tclosed.size(); ++n)
                h3 += coeffs.tc[n] * hcb_identity_lhs(tclosed[n], N, l, i);
        }
        for (size_t n = 0; n < vids.size(); ++n)
            h3 += coeffs.v[n] * hcb_identity_lhs(vids[n], N, 0, i);
    }

    H3StructureCheck res;
    const MatR ntot = hcb_total_number(N);
    res.number_commutator = (h3 * ntot - ntot * h3).cwiseAbs().maxCoeff();

    auto tpoly = [&](double nu) {
        return coeffs.t[0] * (N - 1 - nu) * (N - 2 - nu) +
               (coeffs.t[1] + coeffs.t[2] + coeffs.t[3] + coeffs.t[4]) *
                   (nu - 1) * (N - 1 - nu) +
               coeffs.t[5] * (nu - 1) * (nu - 2) +
               (coeffs.tc[0] + coeffs.tc[1]) * (N - 1 - nu) + coeffs.tc[2];
    };
    auto vpoly = [&](double nu) {
        return coeffs.v[0] * (N - nu) * (N - 1 - nu) +
               (coeffs.v[1] + coeffs.v[2]) * (nu - 1) * (N - nu);
    };

    const MatR hop = hcb_hopping_sum(N);
    std::map<int, std::vector<Eigen::Index>> sectors;
    for (Eigen::Index s = 0; s < d; ++s)
        sectors[std::popcount(static_cast<unsigned long long>(s))].push_back(s);

    for (const auto& [nu, idx] : sectors) {
        const Eigen::Index ds = static_cast<Eigen::Index>(idx.size());
        MatR sub(ds, ds), hopsub(ds, ds);
        for (Eigen::Index r = 0; r < ds; ++r)
            for (Eigen::Index c = 0; c < ds; ++c) {
                sub(r, c) = h3(idx[r], idx[c]);
                hopsub(r, c) = hop(idx[r], idx[c]);
            }
        const MatR expected = tpoly(nu) * hopsub +
                              vpoly(nu) * nu * MatR::Identity(ds, ds);
        res.sector_structure_residual = std::max(
            res.sector_structure_residual, (sub - expected).cwiseAbs().maxCoeff());
    }

    // half filling: every eigenvector of H3 must sit inside one IRHM eigenspace
    const auto& half = sectors[N / 2];
    const Eigen::Index ds = static_cast<Eigen::Index>(half.size());
    const MatC hirhm = irhm_hamiltonian(N, irhm_default_coupling(N)).mat;
    MatR h3sub(ds, ds);
    MatC hsub(ds, ds);
    for (Eigen::Index r = 0; r < ds; ++r)
        for (Eigen::Index c = 0; c < ds; ++c) {
            h3sub(r, c) = h3(half[r], half[c]);
            hsub(r, c) = hirhm(half[r], half[c]);
        }
    Eigen::SelfAdjointEigenSolver<MatR> s3(h3sub);
    Eigen::SelfAdjointEigenSolver<MatC> sh(hsub);

    std::map<long, std::vector<Eigen::Index>> groups;   // IRHM eigenvalue clusters
    for (Eigen::Index k = 0; k < ds; ++k)
        groups[std::lround(sh.eigenvalues()[k] * 1e8)].push_back(k);

    res.half_filled_min_overlap = 1.0;
    for (Eigen::Index c = 0; c < ds; ++c) {
        const VecC v = s3.eigenvectors().col(c).cast<Cx>();
        double bestp = 0.0;
        for (const auto& [key, cols] : groups) {
            double p2 = 0.0;
            for (const Eigen::Index col : cols)
                p2 += std::norm(sh.eigenvectors().col(col).dot(v));
            bestp = std::max(bestp, std::sqrt(p2));
        }
        res.half_filled_min_overlap = std::min(res.half_filled_min_overlap, bestp);
    }
    return res;
}

MatR hcb_heisenberg_matrix(int n_sites, double coupling) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatR h = MatR::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s)
        for (int i = 0; i < n_sites; ++i)
            for (int j = i + 1; j < n_sites; ++j) {
                const bool ui = site_bit(s, i), uj = site_bit(s, j);
                if (ui && uj) h(s, s) += coupling;   // n_i n_j
                if (ui != uj)
                    h(s ^ (Eigen::Index{1} << i) ^ (Eigen::Index{1} << j), s) += 0.5 * coupling;
            }
    return h;
}

// ---- Lang-Firsov transform on a truncated phonon space ----

namespace {

MatR kron(const MatR& a, const MatR& b) {
    MatR out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// exp of a real antisymmetric matrix via the Hermitian spectrum of iK.
MatC exp_antisymmetric(const MatR& s) {
    const MatC k = Cx(0.0, 1.0) * s.cast<Cx>();
    Eigen::SelfAdjointEigenSolver<MatC> solver(k);
    VecC phases(s.rows());
    for (Eigen::Index q = 0; q < s.rows(); ++q)
        phases[q] = std::exp(Cx(0.0, -solver.eigenvalues()[q]));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

} // namespace

LangFirsovCheck lang_firsov_verify(int n_sites, double g, double omega0,
                                   double coupling, int phonon_cutoff,
                                   int proj_occupation) {
    if (n_sites < 1 || n_sites > 3)
        throw std::invalid_argument("lang_firsov_verify: n_sites must be in [1, 3]");
    if (phonon_cutoff < 1)
        throw std::invalid_argument("lang_firsov_verify: phonon_cutoff must be >= 1");
    const Eigen::Index dph = phonon_cutoff + 1;
    const Eigen::Index dhcb = Eigen::Index{1} << n_sites;
    Eigen::Index dim = dhcb;
    for (int s = 0; s < n_sites; ++s) {
        dim *= dph;
        if (dim > 6000)
            throw std::invalid_argument("lang_firsov_verify: truncated space too large");
    }

    MatR a1 = MatR::Zero(dph, dph);
    for (Eigen::Index q = 1; q < dph; ++q) a1(q - 1, q) = std::sqrt(static_cast<double>(q));
    const MatR iph = MatR::Identity(dph, dph);

    // composite ordering: hcb index first, then phonon modes site by site
    std::vector<MatR> aops;
    for (int s = 0; s < n_sites; ++s) {
        MatR acc = MatR::Identity(dhcb, dhcb);
        for (int q = 0; q < n_sites; ++q) acc = kron(acc, q == s ? a1 : iph);
        aops.push_back(std::move(acc));
    }
    std::vector<MatR> nops;
    for (int s = 0; s < n_sites; ++s) {
        MatR n = hcb_number(s, n_sites);
        MatR acc = n;
        for (int q = 0; q < n_sites; ++q) acc = kron(acc, iph);
        nops.push_back(std::move(acc));
    }
    std::vector<MatR> bops, bdops;
    for (int s = 0; s < n_sites; ++s) {
        MatR b = hcb_annihilation(s, n_sites);
        MatR acc = b;
        for (int q = 0; q < n_sites; ++q) acc = kron(acc, iph);
        bops.push_back(acc);
        bdops.push_back(acc.transpose());
    }

    MatR h = MatR::Zero(dim, dim);
    for (int i = 0; i < n_sites; ++i)
        for (int j = i + 1; j < n_sites; ++j)
            h += coupling * (0.5 * (bdops[i] * bops[j] + bdops[j] * bops[i]) +
                             nops[i] * nops[j]);
    for (int s = 0; s < n_sites; ++s)
        h += omega0 * (aops[s].transpose() * aops[s]) +
             g * omega0 * nops[s] * (aops[s] + aops[s].transpose());

    MatR gen = MatR::Zero(dim, dim);
    for (int s = 0; s < n_sites; ++s)
        gen -= g * nops[s] * (aops[s] - aops[s].transpose());

    const MatC es = exp_antisymmetric(gen);
    const MatC transformed = es * h.cast<Cx>() * es.adjoint();

    // transformed operator from the displacement formulas
    MatC formula = MatC::Zero(dim, dim);
    for (int i = 0; i < n_sites; ++i)
        for (int j = i + 1; j < n_sites; ++j) {
            const MatC xi = exp_antisymmetric(-g * (aops[i] - aops[i].transpose()));
            const MatC xj = exp_antisymmetric(g * (aops[j] - aops[j].transpose()));
            const MatC hopij = coupling * 0.5 * bdops[i].cast<Cx>() * bops[j].cast<Cx>() * xi * xj;
            formula += hopij + hopij.adjoint();
            formula += coupling * (nops[i] * nops[j]).cast<Cx>();
        }
    for (int s = 0; s < n_sites; ++s)
        formula += omega0 * (aops[s].transpose() * aops[s]).cast<Cx>() -
                   g * g * omega0 * nops[s].cast<Cx>();

    // project onto low total phonon occupation, where truncation is converged
    std::vector<Eigen::Index> keep;
    for (Eigen::Index idx = 0; idx < dim; ++idx) {
        Eigen::Index rem = idx;
        int occ = 0;
        for (int s = n_sites - 1; s >= 0; --s) {
            occ += static_cast<int>(rem % dph);
            rem /= dph;
        }
        if (occ <= proj_occupation) keep.push_back(idx);
    }
    const Eigen::Index dk = static_cast<Eigen::Index>(keep.size());
    MatC diff(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r)
        for (Eigen::Index c = 0; c < dk; ++c)
            diff(r, c) = transformed(keep[r], keep[c]) - formula(keep[r], keep[c]);

    LangFirsovCheck res;
    res.residual = diff.norm();
    res.dimension = dim;

    // polaron shift on the one-particle, zero-phonon state
    Eigen::Index one = 1;   // hcb index with site 0 occupied
    Eigen::Index idx = one;
    for (int s = 0; s < n_sites; ++s) idx *= dph;   // phonon vacuum occupies slot 0
    res.polaron_shift_error = std::abs(transformed(idx, idx).real() + g * g * omega0);
    return res;
}

} // namespace rvb
