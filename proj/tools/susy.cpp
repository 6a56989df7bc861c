#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csusy/csusy.hpp"

using json = nlohmann::ordered_json;
using namespace csusy;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRegularity = 3;
constexpr int kExitInvariant = 4;

struct CliOverrides {
    CLI::App* cmd = nullptr;
    std::string config_path;
    std::string system, out_dir;
    double m = 0, A = 0, c1 = 0, c2 = 0, lambda = 0, B = 0, C = 0, c = 0;
    double window_lo = 0, window_hi = 0;
    double tau_shoot = 0, tau_node = 0, tau_transform = 0;
    int ell = 0, n0 = 0, n_points = 0, max_states = 0;
    bool allow_singular = false;
};

void add_common_options(CLI::App* cmd, CliOverrides& o) {
    o.cmd = cmd;
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--system", o.system, "coulomb | oscillator | trig");
    cmd->add_option("--m", o.m, "Dirac mass");
    cmd->add_option("--ell", o.ell, "coulomb angular momentum");
    cmd->add_option("--A", o.A, "oscillator shift parameter");
    cmd->add_option("--c1", o.c1, "oscillator solution constant");
    cmd->add_option("--c2", o.c2, "oscillator solution constant");
    cmd->add_option("--n0", o.n0, "coulomb level to delete");
    cmd->add_option("--lambda", o.lambda, "insertion energy");
    cmd->add_option("--B", o.B, "Wronskian offset constant");
    cmd->add_option("--C", o.C, "additive potential constant");
    cmd->add_option("--c", o.c, "Riccati family parameter");
    cmd->add_option("--n-points", o.n_points, "grid resolution");
    cmd->add_option("--window-lo", o.window_lo, "spectrum window lower edge");
    cmd->add_option("--window-hi", o.window_hi, "spectrum window upper edge");
    cmd->add_option("--max-states", o.max_states, "eigenvalue cap");
    cmd->add_option("--tau-shoot", o.tau_shoot, "eigenvalue tolerance");
    cmd->add_option("--tau-node", o.tau_node, "Wronskian zero threshold");
    cmd->add_option("--tau-transform", o.tau_transform, "residual tolerance");
    cmd->add_flag("--allow-singular", o.allow_singular,
                  "report singular configurations instead of failing");
    cmd->add_option("--out-dir", o.out_dir, "artifact directory");
}

RunConfig resolve_config(const CliOverrides& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot open " + o.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(e.what());
        }
        cfg = parse_config(j);
    }
    auto set = [&](const char* flag) { return o.cmd->count(flag) > 0; };
    if (set("--system")) cfg.system = o.system;
    if (set("--m")) cfg.m = o.m;
    if (set("--ell")) cfg.ell = o.ell;
    if (set("--A")) cfg.A = o.A;
    if (set("--c1")) cfg.c1 = o.c1;
    if (set("--c2")) cfg.c2 = o.c2;
    if (set("--n0")) cfg.n0 = o.n0;
    if (set("--lambda")) cfg.lambda = o.lambda;
    if (set("--B")) cfg.B = o.B;
    if (set("--C")) cfg.C = o.C;
    if (set("--c")) cfg.c = o.c;
    if (set("--n-points")) cfg.n_points = o.n_points;
    if (set("--window-lo")) cfg.window_lo = o.window_lo;
    if (set("--window-hi")) cfg.window_hi = o.window_hi;
    if (set("--max-states")) cfg.max_states = o.max_states;
    if (set("--tau-shoot")) cfg.tau_shoot = o.tau_shoot;
    if (set("--tau-node")) cfg.tau_node = o.tau_node;
    if (set("--tau-transform")) cfg.tau_transform = o.tau_transform;
    if (o.allow_singular) cfg.allow_singular = true;
    if (set("--out-dir")) cfg.out_dir = o.out_dir;
    if (cfg.system != "coulomb" && cfg.system != "oscillator" && cfg.system != "trig")
        throw ConfigError("unknown system: " + cfg.system);
    if (cfg.tau_shoot <= 0 || cfg.tau_node <= 0 || cfg.tau_transform <= 0)
        throw ConfigError("tolerances must be positive");
    return cfg;
}

void write_csv(const std::filesystem::path& path, const SampledFunction& f) {
    std::ofstream out(path);
    out.precision(14);
    out << "x,value\n";
    for (int i = f.lo(); i <= f.hi(); ++i)
        out << (*f.grid)[i] << ',' << f.v[static_cast<size_t>(i)] << '\n';
}

json spectrum_json(const SpectrumReport& rep, double C, double m) {
    json out;
    out["potential"] = rep.potential_label;
    out["window"] = {rep.window_lo, rep.window_hi};
    out["eigenvalues"] = json::array();
    for (const auto& e : rep.eigenvalues) {
        json entry;
        entry["epsilon"] = e.epsilon;
        entry["node_count"] = e.node_count;
        entry["normalizable"] = e.normalizable;
        try {
            auto [ep, en] = energy_map(e.epsilon, C, m);
            entry["dirac_energies"] = {ep, en};
        } catch (const Error&) {
            entry["dirac_energies"] = nullptr;
        }
        out["eigenvalues"].push_back(entry);
    }
    return out;
}

json regularity_json(const RegularityReport& reg) {
    json out;
    out["wronskian_nodeless"] = reg.wronskian_nodeless;
    out["wronskian_zero_xs"] = reg.wronskian_zero_xs;
    out["qhat_nodeless"] = reg.qhat_nodeless;
    out["qhat_node_xs"] = reg.qhat_node_xs;
    out["integral_boundedness"] = reg.integral_boundedness;
    out["c_admissible_below"] = reg.c_admissible_below;
    out["c_admissible_above"] = reg.c_admissible_above;
    out["lambda_within_bound"] = reg.lambda_within_bound;
    return out;
}

json diff_json(const DiffReport& diff) {
    json out;
    out["retained"] = json::array();
    for (const auto& [b, a] : diff.retained) out["retained"].push_back({b, a});
    out["deleted"] = diff.deleted;
    out["inserted"] = diff.inserted;
    return out;
}

int cmd_spectrum(const RunConfig& cfg) {
    ModelSystem sys = build_system(cfg);
    ShootOptions opt;
    opt.tau_shoot = cfg.tau_shoot;
    opt.max_states = cfg.max_states;
    const auto w = default_window(cfg, sys);
    SpectrumReport rep = shoot_spectrum(sys.U0, w, opt, sys.name);
    std::cout << spectrum_json(rep, 0.0, cfg.m).dump(2) << '\n';
    return 0;
}

int cmd_transform(const RunConfig& cfg) {
    Pipeline p = run_pipeline(cfg, true);

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_csv(dir / "U1.csv", p.tr.U1);
    write_csv(dir / "q1.csv", p.q1);
    write_csv(dir / "wronskian.csv", p.tr.wron.w);

    // density of the lowest transformed bound state, spinor-assembled from q1
    if (!p.after.eigenvalues.empty()) {
        const double eps = p.after.eigenvalues.front().epsilon;
        ShootOptions opt;
        opt.tau_shoot = cfg.tau_shoot;
        SampledFunction phi = shoot_eigenfunction(p.tr.U1, eps, opt);
        const double E = energy_map(eps, 0.0, cfg.m).first;
        Spinor s = assemble_spinor(p.q1, phi, E, cfg.m);
        SampledFunction dens = make_sampled(phi.grid);
        dens.valid_lo = s.psi2.lo();
        dens.valid_hi = s.psi2.valid_hi;
        for (int i = dens.lo(); i <= dens.hi(); ++i) {
            const auto ui = static_cast<size_t>(i);
            dens.v[ui] = s.psi1.v[ui] * s.psi1.v[ui] + s.psi2.v[ui] * s.psi2.v[ui];
        }
        const double nrm = integrate(dens, dens.lo(), dens.hi());
        if (nrm > 0) for (auto& t : dens.v) t /= nrm;
        write_csv(dir / "spinors.csv", dens);
    }

    json rep;
    rep["system"] = cfg.system;
    rep["transform"] = {{"order", cfg.system == "trig" ? 3 : 2},
                        {"n0", cfg.n0},
                        {"lambda", cfg.lambda},
                        {"B", cfg.B},
                        {"C", cfg.C}};
    if (cfg.c) rep["transform"]["c"] = *cfg.c;
    rep["regularity"] = regularity_json(p.reg);
    rep["spectrum_before"] = spectrum_json(p.before, 0.0, cfg.m);
    rep["spectrum_after"] = spectrum_json(p.after, 0.0, cfg.m);
    rep["diff"] = diff_json(p.diff);
    std::ofstream out(dir / "report.json");
    out << rep.dump(2) << '\n';
    std::cout << (dir / "report.json").string() << '\n';
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    json checks = json::array();
    auto push = [&checks](const std::string& name, bool pass, double measured,
                          double bound) {
        checks.push_back({{"name", name},
                          {"pass", pass},
                          {"measured", measured},
                          {"bound", bound}});
    };

    ModelSystem sys = build_system(cfg);

    // pseudoscalar reduction identity, relative to the local potential scale
    double ident = 0.0;
    for (int i = 0; i < sys.grid->n_points; ++i) {
        const double x = (*sys.grid)[i];
        const double u = sys.U0_fn(x);
        const double r = sys.q0_fn(x) * sys.q0_fn(x) + sys.dq0_fn(x) - u;
        ident = std::max(ident, std::abs(r) / (1.0 + std::abs(u)));
    }
    push("q0^2 + q0' = U0", ident < 1e-9, ident, 1e-9);

    // closed-form spinors solve the Dirac equation
    SampledFunction q0 = sample(sys.grid, sys.q0_fn, sys.dq0_fn);
    double dres = 0.0;
    for (int n = 0; n <= 2; ++n) {
        Spinor s;
        s.E = sys.abs_E_n(n);
        s.m = sys.m;
        s.psi1 = sys.psi1(n);
        s.psi2 = sys.psi2(n);
        dres = std::max(dres, dirac_residual(s, q0));
    }
    push("catalog spinor Dirac residual", dres < 1e-7, dres, 1e-7);

    Pipeline p = run_pipeline(cfg, false);
    push("Wronskian nodeless", p.reg.wronskian_nodeless,
         p.reg.wronskian_nodeless ? 0.0 : 1.0, 0.0);
    push("q_hat nodeless", p.reg.qhat_nodeless,
         p.reg.qhat_nodeless ? 0.0 : 1.0, 0.0);

    // kernel of the transformation
    SampledFunction ker = transform_solution(p.chain, p.chain.members[0], &p.tr.wron);
    push("transform kernel", ker.max_abs() < cfg.tau_transform, ker.max_abs(),
         cfg.tau_transform);

    // Riccati closure on the interior
    double closure = 0.0;
    for (int i = p.q1.lo() + 5; i <= p.q1.hi() - 5; ++i) {
        const auto ui = static_cast<size_t>(i);
        closure = std::max(closure, std::abs(p.q1.v[ui] * p.q1.v[ui] + p.q1.d[ui] -
                                             p.tr.U1.v[ui]));
    }
    push("Riccati closure", closure < cfg.tau_transform, closure, cfg.tau_transform);

    bool all = true;
    for (const auto& c : checks) all = all && c.at("pass").get<bool>();
    json rep;
    rep["system"] = cfg.system;
    rep["pass"] = all;
    rep["checks"] = checks;
    std::cout << rep.dump(2) << '\n';
    return all ? 0 : kExitInvariant;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"confluent SUSY transformations for 1-D Dirac systems"};
    app.require_subcommand(1);

    CliOverrides so, to, vo;
    add_common_options(app.add_subcommand("spectrum", "eigenvalues of the base system"), so);
    add_common_options(app.add_subcommand("transform", "run the transformation and emit artifacts"), to);
    add_common_options(app.add_subcommand("verify", "run the invariant checks"), vo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    const CliOverrides& active = so.cmd->parsed() ? so : to.cmd->parsed() ? to : vo;
    try {
        RunConfig cfg = resolve_config(active);
        try {
            if (so.cmd->parsed()) return cmd_spectrum(cfg);
            if (to.cmd->parsed()) return cmd_transform(cfg);
            return cmd_verify(cfg);
        } catch (const SingularWronskianError& e) {
            std::cerr << e.what() << '\n';
            return cfg.allow_singular ? 0 : kExitRegularity;
        } catch (const SingularChainError& e) {
            std::cerr << e.what() << '\n';
            return cfg.allow_singular ? 0 : kExitRegularity;
        } catch (const FamilySingularityError& e) {
            std::cerr << e.what() << '\n';
            return cfg.allow_singular ? 0 : kExitRegularity;
        }
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
