#include "rvb/spin_ops.hpp"

#include <bit>
#include <stdexcept>

namespace rvb {

SpinOp spin_op_from_string(const std::string& name) {
    if (name == "Sx") return SpinOp::Sx;
    if (name == "Sy") return SpinOp::Sy;
    if (name == "Sz") return SpinOp::Sz;
    if (name == "S+") return SpinOp::Splus;
    if (name == "S-") return SpinOp::Sminus;
    throw std::invalid_argument("unknown spin operator: " + name);
}

PureState apply_spin(SpinOp op, int site, const PureState& state) {
    const int n = state.n_sites();
    if (site < 0 || site >= n)
        throw std::out_of_range("apply_spin: site out of range");
    const VecC& in = state.amplitudes();
    VecC out = VecC::Zero(in.size());
    const Eigen::Index mask = Eigen::Index{1} << site;
    for (Eigen::Index b = 0; b < in.size(); ++b) {
        const Cx a = in[b];
        if (a == Cx(0.0)) continue;
        const bool up = (b & mask) != 0;
        switch (op) {
        case SpinOp::Sz:
            out[b] += (up ? 0.5 : -0.5) * a;
            break;
        case SpinOp::Splus:
            if (!up) out[b | mask] += a;
            break;
        case SpinOp::Sminus:
            if (up) out[b & ~mask] += a;
            break;
        case SpinOp::Sx:
            out[b ^ mask] += 0.5 * a;
            break;
        case SpinOp::Sy:
            // S^y = (S^+ - S^-)/(2i): flipping up->down picks +i/2, down->up -i/2
            out[b ^ mask] += (up ? Cx(0.0, 0.5) : Cx(0.0, -0.5)) * a;
            break;
        }
    }
    return PureState(n, std::move(out));
}

VecC apply_heisenberg_pair(const VecC& v, int i, int j, int n_sites) {
    if (i == j || i < 0 || j < 0 || i >= n_sites || j >= n_sites)
        throw std::out_of_range("apply_heisenberg_pair: bad site pair");
    VecC out = VecC::Zero(v.size());
    const Eigen::Index mi = Eigen::Index{1} << i;
    const Eigen::Index mj = Eigen::Index{1} << j;
    for (Eigen::Index b = 0; b < v.size(); ++b) {
        const Cx a = v[b];
        if (a == Cx(0.0)) continue;
        const bool ui = (b & mi) != 0, uj = (b & mj) != 0;
        out[b] += (ui == uj ? 0.25 : -0.25) * a;
        if (ui != uj) out[b ^ mi ^ mj] += 0.5 * a;   // (S+S- + S-S+)/2
    }
    return out;
}

VecC apply_s2_total(const VecC& v, int n_sites) {
    VecC out = 0.75 * n_sites * v;
    for (int i = 0; i < n_sites; ++i)
        for (int j = i + 1; j < n_sites; ++j)
            out += 2.0 * apply_heisenberg_pair(v, i, j, n_sites);
    return out;
}

VecC apply_sz_total(const VecC& v, int n_sites) {
    VecC out(v.size());
    for (Eigen::Index b = 0; b < v.size(); ++b) {
        const int pop = static_cast<int>(std::popcount(static_cast<unsigned long long>(b)));
        out[b] = (pop - 0.5 * n_sites) * v[b];
    }
    return out;
}

MatC spin_matrix(SpinOp op, int site, int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatC m = MatC::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
        VecC e = VecC::Zero(d);
        e[b] = 1.0;
        m.col(b) = apply_spin(op, site, PureState(n_sites, std::move(e))).amplitudes();
    }
    return m;
}

MatC heisenberg_all_pairs_matrix(int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatC m = MatC::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
        VecC e = VecC::Zero(d);
        e[b] = 1.0;
        VecC col = VecC::Zero(d);
        for (int i = 0; i < n_sites; ++i)
            for (int j = i + 1; j < n_sites; ++j)
                col += apply_heisenberg_pair(e, i, j, n_sites);
        m.col(b) = col;
    }
    return m;
}

MatC szsz_all_pairs_matrix(int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatC m = MatC::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
        double s = 0.0;
        for (int i = 0; i < n_sites; ++i)
            for (int j = i + 1; j < n_sites; ++j)
                s += sz_of(b, i) * sz_of(b, j);
        m(b, b) = s;
    }
    return m;
}

MatC sz_total_matrix(int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatC m = MatC::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
        const int pop = static_cast<int>(std::popcount(static_cast<unsigned long long>(b)));
        m(b, b) = pop - 0.5 * n_sites;
    }
    return m;
}

MatC s2_total_matrix(int n_sites) {
    const Eigen::Index d = Eigen::Index{1} << n_sites;
    MatC m = MatC::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
        VecC e = VecC::Zero(d);
        e[b] = 1.0;
        m.col(b) = apply_s2_total(e, n_sites);
    }
    return m;
}

} // namespace rvb
