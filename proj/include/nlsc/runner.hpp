#pragma once

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "nlsc/classify.hpp"
#include "nlsc/config.hpp"
#include "nlsc/dynamics.hpp"
#include "nlsc/exact.hpp"
#include "nlsc/groundstate.hpp"
#include "nlsc/io.hpp"
#include "nlsc/virial.hpp"

namespace nlsc {

inline Json config_echo_json(const RunConfig& cfg) {
    Json j;
    j["run"]["subcommand"] = cfg.subcommand;
    j["model"]["d"] = cfg.d;
    j["model"]["alpha"] = cfg.alpha;
    j["model"]["c"] = cfg.c;
    j["grid"]["r_max"] = cfg.grid.r_max;
    j["grid"]["n"] = cfg.grid.n;
    j["controls"]["dt0"] = cfg.controls.dt0;
    j["controls"]["t_end"] = cfg.controls.t_end;
    j["controls"]["adapt"] = cfg.controls.adapt;
    j["controls"]["blowup_h1_factor"] = cfg.controls.blowup_h1_factor;
    j["controls"]["energy_drift_cap"] = cfg.controls.energy_drift_cap;
    j["controls"]["snapshot_stride"] = cfg.controls.snapshot_stride;
    j["controls"]["max_steps"] = cfg.controls.max_steps;
    j["data"]["family"] = cfg.data.family;
    j["data"]["scale"] = cfg.data.scale;
    j["data"]["amplitude"] = cfg.data.amplitude;
    j["data"]["width"] = cfg.data.width;
    j["virial"]["R"] = cfg.virial.R;
    j["virial"]["eps"] = cfg.virial.eps;
    j["io"]["out_dir"] = cfg.io.out_dir;
    j["io"]["format"] = cfg.io.format;
    j["sweep"]["ds"] = cfg.sweep.ds;
    j["sweep"]["alphas"] = cfg.sweep.alphas;
    j["sweep"]["cs"] = cfg.sweep.cs;
    j["sweep"]["lambdas"] = cfg.sweep.lambdas;
    {
        std::vector<double> ga, gw;
        for (const auto& g : cfg.sweep.gaussians) {
            ga.push_back(g.amplitude);
            gw.push_back(g.width);
        }
        j["sweep"]["gaussian_amplitudes"] = ga;
        j["sweep"]["gaussian_widths"] = gw;
    }
    j["sweep"]["workers"] = cfg.sweep.workers;
    return j;
}

namespace detail {

inline Json field_json(const Field& f) {
    std::vector<double> r, re, im;
    for (int j = 0; j < f.grid->n; ++j) {
        r.push_back(f.grid->r[j]);
        re.push_back(f.v[j].real());
        im.push_back(f.v[j].imag());
    }
    Json j;
    j["r"] = r;
    j["re"] = re;
    j["im"] = im;
    return j;
}

inline Json trajectory_json(const Trajectory& traj) {
    Json j = Json::array();
    for (const auto& s : traj.snaps) {
        Json row;
        row["t"] = s.t;
        row["mass"] = s.mass;
        row["energy"] = s.energy;
        row["h1c_sq"] = s.h1c_sq;
        row["l_ap2"] = s.l_ap2;
        row["v_x2"] = s.v_x2;
        row["v_phiR"] = s.v_phi_r;
        row["dt"] = s.dt;
        j.push_back(row);
    }
    return j;
}

inline void write_json(const std::filesystem::path& p, const Json& j) {
    write_text(p, j.dump(2) + "\n");
}

inline Field build_datum(const RunConfig& cfg, const ModelParams& params,
                         const GridPtr& grid) {
    if (cfg.data.family == "gaussian") {
        const double a = cfg.data.amplitude;
        const double w2 = 2.0 * cfg.data.width * cfg.data.width;
        return field_from(grid, [&](double r) { return a * std::exp(-r * r / w2); });
    }
    const GroundState gs = shoot_ground_state(params, grid);
    Field f = gs.profile;
    for (auto& z : f.v) z *= cfg.data.scale;
    return f;
}

// ramp amplitudes under which every admissible eps keeps the annulus margin
// nonnegative; half of that supremum is the operating point
inline double eps_bound(int d) {
    return (d + 2) * std::pow(1.0 + (d - 1) / (3.0 * std::sqrt(3.0)), -0.5 * d);
}

// Nonuniform centered second difference of samples (t, y).
inline double second_difference(double t0, double y0, double t1, double y1, double t2,
                                double y2) {
    return 2.0 * ((y2 - y1) / (t2 - t1) - (y1 - y0) / (t1 - t0)) / (t2 - t0);
}

}  // namespace detail

inline int run_ground(const RunConfig& cfg, const std::filesystem::path& out) {
    const auto params = cfg.model();
    const auto grid = build_grid(params.d, cfg.grid.r_max, cfg.grid.n);
    const GroundState gs = shoot_ground_state(params, grid);
    if (cfg.io.format == "json")
        detail::write_json(out / "profile.json", detail::field_json(gs.profile));
    else
        write_text(out / "profile.csv", field_csv(gs.profile));
    detail::write_json(out / "summary.json", ground_summary_json(gs));
    std::cout << "ground: residuals " << fmt_g17(gs.pohozaev_residuals.first) << " "
              << fmt_g17(gs.pohozaev_residuals.second) << "\n";
    return 0;
}

inline int run_evolve(const RunConfig& cfg, const std::filesystem::path& out) {
    const auto params = cfg.model();
    const auto grid = build_grid(params.d, cfg.grid.r_max, cfg.grid.n);
    const Field u0 = detail::build_datum(cfg, params, grid);
    const Trajectory traj = evolve(u0, params, cfg.controls);
    if (cfg.io.format == "json")
        detail::write_json(out / "trajectory.json", detail::trajectory_json(traj));
    else
        write_text(out / "trajectory.csv", trajectory_csv(traj));
    detail::write_json(out / "summary.json", trajectory_summary_json(traj));
    std::cout << "evolve: " << verdict_name(traj.verdict) << " after "
              << traj.snaps.size() << " snapshots\n";
    return 0;
}

inline int run_virial_check(const RunConfig& cfg, const std::filesystem::path& out) {
    const auto params = cfg.model();
    const auto grid = build_grid(params.d, cfg.grid.r_max, cfg.grid.n);
    const Field u0 = detail::build_datum(cfg, params, grid);
    const auto weight = build_phi_r(build_theta(), cfg.virial.R, grid);
    const Trajectory traj = evolve(u0, params, cfg.controls);

    const double coef = 4.0 * params.d * params.alpha / (params.alpha + 2.0);
    double worst = 0.0;
    for (size_t i = 1; i + 1 < traj.snaps.size(); ++i) {
        const auto& a = traj.snaps[i - 1];
        const auto& b = traj.snaps[i];
        const auto& c = traj.snaps[i + 1];
        const double meas =
            detail::second_difference(a.t, a.v_x2, b.t, b.v_x2, c.t, c.v_x2);
        const double rhs = 8.0 * b.h1c_sq - coef * b.l_ap2;
        // the identity's own scale floors the comparison: near virial balance
        // both sides sit at zero and a pure ratio would be noise against noise
        const double scale = std::max(std::fabs(rhs), 1e-2 * 8.0 * b.h1c_sq);
        worst = std::max(worst, std::fabs(meas - rhs) / scale);
    }
    const bool ok = worst <= 1e-2;

    Json j;
    j["max_rel_mismatch"] = worst;
    j["snapshots"] = traj.snaps.size();
    j["global_rhs_initial"] = global_virial_rhs(u0, params);
    j["localized_bound_initial"] = localized_virial_bound(u0, params, weight);
    const double eps =
        cfg.virial.eps > 0.0 ? cfg.virial.eps : 0.5 * detail::eps_bound(params.d);
    j["positivity_eps"] = eps;
    j["positivity_margin"] = positivity_margin(weight, params.d, eps);
    if (regime_of(params) == Regime::MassCritical)
        j["masscrit_bound_initial"] = masscrit_virial_bound(u0, params, weight, eps);
    j["ok"] = ok;
    detail::write_json(out / "virial.json", j);
    write_text(out / "weight.csv", weight_csv(weight));
    std::cout << "virial-check: max relative mismatch " << fmt_g17(worst) << "\n";
    return ok ? 0 : 1;
}

inline int run_classify(const RunConfig& cfg, const std::filesystem::path& out) {
    const auto params = cfg.model();
    const auto grid = build_grid(params.d, cfg.grid.r_max, cfg.grid.n);
    const Field u0 = detail::build_datum(cfg, params, grid);
    const Thresholds th = thresholds(params);
    const Verdict v = classify(u0, params, th, {true, true});
    Json j;
    j["prediction"] = prediction_name(v.prediction);
    j["rule_fired"] = v.rule_fired;
    for (const auto& [k, val] : v.margins) j["margins"][k] = val;
    j["mass"] = mass(u0);
    j["energy"] = energy(u0, params);
    j["h1c_sq"] = h1c_seminorm_sq(u0, params);
    detail::write_json(out / "classify.json", j);
    std::cout << "classify: " << prediction_name(v.prediction) << " (" << v.rule_fired
              << ")\n";
    return 0;
}

inline int run_sweep(const RunConfig& cfg, const std::filesystem::path& out) {
    SweepConfig sc = cfg.sweep;
    sc.r_max = cfg.grid.r_max;
    sc.n = cfg.grid.n;
    sc.controls = cfg.controls;
    const SweepReport rep = sweep(sc);
    write_text(out / "rows.csv", sweep_csv(rep));
    detail::write_json(out / "summary.json", sweep_summary_json(rep));
    std::cout << "sweep: " << rep.rows.size() << " rows, digest " << rep.config_digest
              << "\n";
    return 0;
}

inline int run_verify(const RunConfig& cfg, const std::filesystem::path& out) {
    const auto params = cfg.model();
    const auto grid = build_grid(params.d, cfg.grid.r_max, cfg.grid.n);
    Json results;
    int failures = 0;
    auto record = [&](const std::string& name, bool pass) {
        results[name] = pass ? "ok" : "FAIL";
        std::cout << (pass ? "ok   " : "FAIL ") << name << "\n";
        if (!pass) ++failures;
    };

    {  // quadratic-form floors on random smooth fields
        std::mt19937_64 rng(12345);
        std::uniform_real_distribution<double> amp(-1.0, 1.0), wid(0.3, 3.0),
            cen(0.0, 0.5 * grid->r_max);
        const double cmin = -0.99 * params.lambda_d;
        bool hardy_ok = true, h1c_ok = true;
        for (int trial = 0; trial < 200; ++trial) {
            const double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
            const double w1 = wid(rng), w2 = wid(rng), w3 = wid(rng);
            const double c2 = cen(rng), c3 = cen(rng);
            Field f = field_from(grid, [&](double r) {
                return a1 * std::exp(-r * r / (2 * w1 * w1)) +
                       a2 * std::exp(-(r - c2) * (r - c2) / (2 * w2 * w2)) +
                       a3 * std::exp(-(r - c3) * (r - c3) / (2 * w3 * w3));
            });
            const double scale = grad_sq(f) + mass(f);
            hardy_ok = hardy_ok && hardy_residual(f) >= -1e-8 * scale;
            h1c_ok = h1c_ok && h1c_seminorm_sq(f, cmin) >= -1e-8 * scale;
        }
        record("hardy-floor", hardy_ok);
        record("h1c-floor", h1c_ok);
    }
    {  // localization weights: construction invariants and the margin window
        const double eb = detail::eps_bound(params.d);
        bool ok = true;
        for (double R : {2.0, 10.0, 50.0}) {
            const auto w = build_phi_r(build_theta(), R, grid);
            ok = ok && positivity_margin(w, params.d, 0.5 * eb) >= -1e-12;
            ok = ok && positivity_margin(w, params.d, 10.0 * eb) < 0.0;
        }
        record("weight-margins", ok);
    }
    {  // flux form of the energy seminorm agrees with the operator form
        Field f = field_from(grid, [](double r) { return r * std::exp(-r * r / 2); });
        const double direct = h1c_seminorm_sq(f, params);
        const auto pf = apply_pc(f, params.c);
        const double via_op = wdot(f, pf).real();
        record("seminorm-flux-identity",
               std::fabs(direct - via_op) <= 1e-10 * std::max(1.0, std::fabs(direct)));
    }
    if (regime_of(params) == Regime::Intercritical) {
        // closed thresholds: f(K) = H and the quadratic tie between them
        const Thresholds th = thresholds(params);
        const double K = th.require_k(), H = th.require_h();
        const double fk = f_func(K, params, th.require_c_gn());
        const double quad =
            (params.d * params.alpha - 4.0) / (2.0 * params.d * params.alpha) * K * K;
        record("threshold-algebra", std::fabs(fk - H) <= 1e-12 * std::fabs(H) &&
                                        std::fabs(quad - H) <= 1e-12 * std::fabs(H));
        record("virial-zero-on-ground",
               [&] {
                   const GroundState gs = shoot_ground_state(params, grid);
                   const double k = h1c_seminorm_sq(gs.profile, params);
                   return std::fabs(global_virial_rhs(gs.profile, params)) <= 5e-3 * 8 * k;
               }());
    }
    detail::write_json(out / "verify.json", results);
    return failures == 0 ? 0 : 1;
}

inline int run(const RunConfig& cfg) {
    const std::filesystem::path out(cfg.io.out_dir);
    std::filesystem::create_directories(out);
    detail::write_json(out / "manifest.json",
                       manifest_json(config_echo_json(cfg), cfg.d, cfg.grid.r_max,
                                     cfg.grid.n));
    try {
        if (cfg.subcommand == "ground") return run_ground(cfg, out);
        if (cfg.subcommand == "evolve") return run_evolve(cfg, out);
        if (cfg.subcommand == "virial-check") return run_virial_check(cfg, out);
        if (cfg.subcommand == "classify") return run_classify(cfg, out);
        if (cfg.subcommand == "sweep") return run_sweep(cfg, out);
        if (cfg.subcommand == "verify") return run_verify(cfg, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: unknown subcommand '" << cfg.subcommand << "'\n";
    return 2;
}

}  // namespace nlsc
