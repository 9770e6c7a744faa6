// Command-line front end: entanglement reports, spectrum and identity
// verification suites, homogenizer runs, and dephasing trajectories.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rvb/dynamics.hpp"
#include "rvb/entanglement.hpp"
#include "rvb/irhm.hpp"
#include "rvb/phonon.hpp"
#include "rvb/valence_bond.hpp"

using namespace rvb;
using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---- fig1 ----

int cmd_fig1(int n_max, const std::string& out_path) {
    std::string csv = "N,e2v_ratio,iconcurrence_ratio\n";
    for (int n = 4; n <= n_max; n += 2)
        csv += std::to_string(n) + "," + fmt(e2v_max(n) / 2.0) + "," +
               fmt(iconcurrence_homogeneous(n) / iconcurrence_max()) + "\n";
    emit(csv, out_path);
    return 0;
}

// ---- verify ----

int cmd_verify(const std::vector<int>& n_list, unsigned long seed,
               const std::string& out_path) {
    json report;
    report["suites"] = json::array();
    bool all_ok = true;
    auto add = [&](const std::string& suite, int n, const std::string& check,
                   double residual, double tol) {
        const bool ok = residual < tol;
        all_ok = all_ok && ok;
        report["suites"].push_back({{"suite", suite},
                                    {"n", n},
                                    {"check", check},
                                    {"residual", residual},
                                    {"tolerance", tol},
                                    {"pass", ok}});
    };

    for (const int n : n_list) {
        if (n < 2 || n > 10) {
            std::cerr << "verify: N=" << n
                      << " rejected: supported range is 2..10 (dense spectra)\n";
            return 2;
        }
        const double coupling = irhm_default_coupling(n);
        const auto spec = spectrum_check(n, coupling);
        add("spectrum", n, "eigenvalue level match", spec.max_match_error, 1e-9);
        if (n % 2 == 0) {
            add("spectrum", n, "ground degeneracy equals Catalan count",
                std::abs(spec.levels.front().degeneracy - catalan_count(n)), 0.5);
            double worst = 0.0;
            for (const auto& cov : all_coverings(n))
                worst = std::max(worst, dimer_eigencheck(cov, n, coupling));
            add("spectrum", n, "dimer products are eigenstates", worst, 1e-10);
        }
        if (n >= 4 && n <= 8) {
            double worst = 0.0;
            for (const auto id : all_hcb_identities())
                worst = std::max(worst, verify_identity(id, n));
            add("identities", n, "all 12 operator identities", worst, 1e-12);
        }
        if (n % 2 == 0 && n >= 4) {
            HomogenizeOptions opts;
            opts.seed = seed;
            const auto hom = homogenize(n, rumer_basis(n), opts);
            add("homogenizer", n, "pair-correlation residual", hom.residual,
                opts.tolerance);
            add("homogenizer", n, "pair entropy vs closed form",
                std::abs(e2v_average(hom.state) - e2v_max(n)), 1e-5);
            const auto dfs = dfs_subspace(n, coupling);
            add("dynamics", n, "DFS dimension equals Catalan count",
                std::abs(static_cast<double>(dfs.ground_indices.size()) -
                         catalan_count(n)),
                0.5);
        }
    }
    report["pass"] = all_ok;
    emit(report.dump(2) + "\n", out_path);
    return all_ok ? 0 : 1;
}

// ---- quotes ----

int cmd_quotes(unsigned long seed, const std::string& out_path) {
    std::string csv = "quantity,computed,reference,abs_error\n";
    auto row = [&](const std::string& name, double computed, double reference) {
        csv += name + "," + fmt(computed) + "," + fmt(reference) + "," +
               fmt(std::abs(computed - reference)) + "\n";
    };
    row("e2v_max(4)", e2v_max(4), 1.792481);
    row("e2v_max(6)", e2v_max(6), 1.921964);
    row("e2v_max(8)", e2v_max(8), 1.9594);

    // four-site nearest-neighbor ring values
    MatC h = MatC::Zero(16, 16);
    for (Eigen::Index b = 0; b < 16; ++b) {
        VecC e = VecC::Zero(16);
        e[b] = 1.0;
        VecC col = VecC::Zero(16);
        for (const auto& [i, j] :
             std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}})
            col += apply_heisenberg_pair(e, i, j, 4);
        h.col(b) = col;
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(h);
    const PureState gs(4, es.eigenvectors().col(0));
    const double nn_entropy = entropy_vn(partial_trace(gs, {0, 1}));
    row("ring4_nn_pair_entropy", nn_entropy, 1.2075);
    row("ring4_nn_pair_entropy_2dp", nn_entropy, 1.21);
    row("chain_pair_entropy(czz=-0.443/3)",
        entropy_isotropic_closed_form(-0.443 / 3.0), 1.37);

    for (int n = 4; n <= 10; n += 2) {
        HomogenizeOptions opts;
        opts.seed = seed;
        opts.tolerance = 1e-9;
        const auto hom = homogenize(n, rumer_basis(n), opts);
        const auto fit = werner_fit(partial_trace(hom.state, {0, 1}));
        row("werner_p(" + std::to_string(n) + ")", fit.p, 1.0 / (n - 1));
    }

    row("catalan(4)", static_cast<double>(catalan_count(4)), 2);
    row("catalan(6)", static_cast<double>(catalan_count(6)), 5);
    row("catalan(8)", static_cast<double>(catalan_count(8)), 14);
    emit(csv, out_path);
    return 0;
}

// ---- vb ----

int cmd_vb_enumerate(int n, bool rumer_only, const std::string& out_path) {
    const auto covs = rumer_only ? rumer_coverings(n) : all_coverings(n);
    json j;
    j["n_sites"] = n;
    j["rumer"] = rumer_only;
    auto& arr = j["coverings"] = json::array();
    for (const auto& cov : covs) {
        json one = json::array();
        for (const auto& [a, b] : cov.pairs) one.push_back({a, b});
        arr.push_back(one);
    }
    emit(j.dump(2) + "\n", out_path);
    return 0;
}

// ---- irhm ----

int cmd_irhm_spectrum(int n, std::optional<double> coupling_opt,
                      const std::string& out_path) {
    const double coupling = coupling_opt.value_or(irhm_default_coupling(n));
    const auto spec = spectrum_check(n, coupling);
    std::string text = "S_T,energy,degeneracy\n";
    for (const auto& lvl : spec.levels)
        text += fmt(lvl.total_spin) + "," + fmt(lvl.energy) + "," +
                std::to_string(lvl.degeneracy) + "\n";
    emit(text, out_path);
    return 0;
}

int cmd_irhm_homogenize(int n, double tol, int restarts, unsigned long seed,
                        const std::string& out_path) {
    HomogenizeOptions opts;
    opts.tolerance = tol;
    opts.max_restarts = restarts;
    opts.seed = seed;
    const auto hom = homogenize(n, rumer_basis(n), opts);
    std::cerr << "residual " << fmt(hom.residual) << " after " << hom.restarts_used
              << " restart(s); e2v " << fmt(e2v_average(hom.state)) << "\n";
    if (!hom.converged) {
        std::cerr << "homogenize did not reach tolerance " << fmt(tol) << "\n";
        return 1;
    }
    emit(hom.state.to_json() + "\n", out_path);
    return 0;
}

int cmd_irhm_named(const std::string& name, const std::string& out_path) {
    const PureState psi = build_named_state(named_state_from_string(name));
    emit(psi.to_json() + "\n", out_path);
    return 0;
}

// ---- entangle ----

int cmd_entangle(const std::string& state_path, const std::string& out_path) {
    const PureState psi = PureState::load(state_path);
    if (!psi.is_normalized(1e-9))
        throw std::runtime_error("entangle: state is not normalized");
    const int n = psi.n_sites();
    const auto corr = correlations(psi);
    std::string csv = "i,j,entropy,czz,werner_p,negativity\n";
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const Eigen::Matrix4cd rho = partial_trace(psi, {i, j});
            const auto fit = werner_fit(rho);
            const auto ppt = ppt_separability(rho);
            csv += std::to_string(i) + "," + std::to_string(j) + "," +
                   fmt(entropy_vn(rho)) + "," + fmt(corr.czz(i, j)) + "," +
                   fmt(fit.p) + "," + fmt(ppt.negativity) + "\n";
        }
    emit(csv, out_path);
    return 0;
}

// ---- phonon ----

int cmd_phonon_identities(int n, const std::string& only,
                          const std::string& out_path) {
    json report = json::array();
    bool ok = true;
    for (const auto id : all_hcb_identities()) {
        if (!only.empty() && to_string(id) != only) continue;
        const double res = verify_identity(id, n);
        ok = ok && res < 1e-12;
        report.push_back({{"identity", to_string(id)}, {"n", n}, {"residual", res}});
    }
    emit(report.dump(2) + "\n", out_path);
    return ok ? 0 : 1;
}

int cmd_phonon_couplings(int n, double g, double omega0, double coupling,
                         const std::string& out_path) {
    const auto c = effective_couplings(n, g, omega0, coupling);
    if (!c.in_regime)
        std::cerr << "warning: outside the strong-coupling non-adiabatic regime "
                     "(g > 1, J/omega0 <= 1); values computed anyway\n";
    const json j = {{"n", n},
                    {"g", c.g},
                    {"omega0", c.omega0},
                    {"j", c.coupling},
                    {"f1", c.f1},
                    {"f2", c.f2},
                    {"j_perp", c.j_perp},
                    {"j_par", c.j_par},
                    {"in_regime", c.in_regime}};
    emit(j.dump(2) + "\n", out_path);
    return 0;
}

// ---- dynamics ----

int cmd_dynamics_run(const std::string& state_path, const std::string& bath_path,
                     double t_max, double dt, std::optional<double> coupling_opt,
                     const std::string& out_path) {
    const PureState psi = PureState::load(state_path);
    const BathSpec bath = BathSpec::load(bath_path);
    const double coupling = coupling_opt.value_or(irhm_default_coupling(psi.n_sites()));
    std::vector<double> times;
    for (double t = 0.0; t <= t_max + 1e-12; t += dt) times.push_back(t);
    const auto rep = rdm_robustness(psi, bath, times, coupling);
    std::string csv = "t,X,Y,E2v,max_rdm_deviation\n";
    for (const auto& r : rep.rows)
        csv += fmt(r.t) + "," + fmt(r.x) + "," + fmt(r.y) + "," + fmt(r.e2v) + "," +
               fmt(r.max_rdm_deviation) + "\n";
    emit(csv, out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-diagonalization toolkit for maximally entangled "
                 "valence-bond states"};
    app.require_subcommand(1);

    // fig1
    int fig1_nmax = 40;
    std::string fig1_out;
    auto* fig1 = app.add_subcommand("fig1", "normalized entanglement curves (CSV)");
    fig1->add_option("--nmax", fig1_nmax, "largest N (even)")->check(CLI::Range(4, 400));
    fig1->add_option("--out", fig1_out, "output file (default stdout)");

    // verify
    std::vector<int> verify_n{4, 6};
    unsigned long verify_seed = 12345;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "run the invariant suites (JSON)");
    verify->add_option("--n", verify_n, "system sizes");
    verify->add_option("--seed", verify_seed, "homogenizer seed");
    verify->add_option("--out", verify_out, "output file (default stdout)");

    // quotes
    unsigned long quotes_seed = 12345;
    std::string quotes_out;
    auto* quotes = app.add_subcommand("quotes",
                                      "computed values vs reference quotes (CSV)");
    quotes->add_option("--seed", quotes_seed, "homogenizer seed");
    quotes->add_option("--out", quotes_out, "output file (default stdout)");

    // vb enumerate
    auto* vb = app.add_subcommand("vb", "valence-bond coverings");
    int vb_n = 6;
    bool vb_rumer = false;
    std::string vb_out;
    auto* vb_enum = vb->add_subcommand("enumerate", "list coverings (JSON)");
    vb_enum->add_option("--n", vb_n, "number of sites (even)")->required();
    vb_enum->add_flag("--rumer", vb_rumer, "only non-crossing coverings");
    vb_enum->add_option("--out", vb_out, "output file (default stdout)");

    // irhm
    auto* irhm = app.add_subcommand("irhm", "infinite-range Heisenberg model");
    int irhm_n = 8;
    std::optional<double> irhm_j;
    std::string irhm_out;
    auto* irhm_spec = irhm->add_subcommand("spectrum", "levels and degeneracies (CSV)");
    irhm_spec->add_option("--n", irhm_n, "number of sites")->required();
    irhm_spec->add_option("--j", irhm_j, "coupling (default 1/(N-1))");
    irhm_spec->add_option("--out", irhm_out, "output file (default stdout)");

    int hom_n = 8;
    double hom_tol = 1e-6;
    int hom_restarts = 20;
    unsigned long hom_seed = 12345;
    std::string hom_out;
    auto* irhm_hom = irhm->add_subcommand("homogenize",
                                          "find an equal-correlation ground state");
    irhm_hom->add_option("--n", hom_n, "number of sites (even)")->required();
    irhm_hom->add_option("--tol", hom_tol, "target max pair-correlation residual");
    irhm_hom->add_option("--restarts", hom_restarts, "seeded restarts");
    irhm_hom->add_option("--seed", hom_seed, "base seed");
    irhm_hom->add_option("--out", hom_out, "state JSON output (default stdout)");

    std::string named_name = "HS";
    std::string named_out;
    auto* irhm_named = irhm->add_subcommand("named", "emit an explicit maximal state");
    irhm_named->add_option("--state", named_name, "HS, PSI6A, or PSI6B")->required();
    irhm_named->add_option("--out", named_out, "state JSON output (default stdout)");

    // entangle
    std::string ent_state, ent_out, ent_report = "csv";
    auto* entangle = app.add_subcommand("entangle", "per-pair entanglement report");
    entangle->add_option("--state", ent_state, "state JSON file")->required();
    entangle->add_option("--report", ent_report, "report format (csv)")
        ->check(CLI::IsMember({"csv"}));
    entangle->add_option("--out", ent_out, "output file (default stdout)");

    // phonon
    auto* phonon = app.add_subcommand("phonon", "phonon-coupling machinery");
    int pid_n = 5;
    bool pid_all = false;
    std::string pid_name, pid_out;
    auto* ph_ids = phonon->add_subcommand("verify-identities",
                                          "check the operator identities (JSON)");
    ph_ids->add_option("--n", pid_n, "number of sites (4..8)")->required();
    ph_ids->add_flag("--all", pid_all, "check every identity (default)");
    ph_ids->add_option("--name", pid_name, "check one identity, e.g. T1");
    ph_ids->add_option("--out", pid_out, "output file (default stdout)");

    int pc_n = 6;
    double pc_g = 2.0, pc_w0 = 1.0, pc_j = 0.5;
    std::string pc_out;
    auto* ph_coup = phonon->add_subcommand("couplings",
                                           "second-order effective couplings (JSON)");
    ph_coup->add_option("--n", pc_n, "number of sites")->required();
    ph_coup->add_option("--g", pc_g, "dimensionless coupling")->required();
    ph_coup->add_option("--omega0", pc_w0, "phonon frequency")->required();
    ph_coup->add_option("--j", pc_j, "bare exchange")->required();
    ph_coup->add_option("--out", pc_out, "output file (default stdout)");

    // dynamics
    std::string dyn_state, dyn_bath, dyn_out;
    double dyn_tmax = 50.0, dyn_dt = 0.05;
    std::optional<double> dyn_j;
    auto* dynamics = app.add_subcommand("dynamics", "dephasing evolution");
    auto* dyn_run = dynamics->add_subcommand("run", "trajectory CSV");
    dyn_run->add_option("--state", dyn_state, "initial state JSON")->required();
    dyn_run->add_option("--bath", dyn_bath, "bath JSON")->required();
    dyn_run->add_option("--tmax", dyn_tmax, "final time");
    dyn_run->add_option("--dt", dyn_dt, "output step");
    dyn_run->add_option("--j", dyn_j, "coupling (default 1/(N-1))");
    dyn_run->add_option("--out", dyn_out, "output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fig1) return cmd_fig1(fig1_nmax, fig1_out);
        if (*verify) return cmd_verify(verify_n, verify_seed, verify_out);
        if (*quotes) return cmd_quotes(quotes_seed, quotes_out);
        if (*vb_enum) return cmd_vb_enumerate(vb_n, vb_rumer, vb_out);
        if (*irhm_spec) return cmd_irhm_spectrum(irhm_n, irhm_j, irhm_out);
        if (*irhm_hom)
            return cmd_irhm_homogenize(hom_n, hom_tol, hom_restarts, hom_seed, hom_out);
        if (*irhm_named) return cmd_irhm_named(named_name, named_out);
        if (*entangle) return cmd_entangle(ent_state, ent_out);
        if (*ph_ids) return cmd_phonon_identities(pid_n, pid_name, pid_out);
        if (*ph_coup) return cmd_phonon_couplings(pc_n, pc_g, pc_w0, pc_j, pc_out);
        if (*dyn_run)
            return cmd_dynamics_run(dyn_state, dyn_bath, dyn_tmax, dyn_dt, dyn_j, dyn_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
