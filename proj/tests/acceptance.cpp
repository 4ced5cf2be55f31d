// Acceptance gate: every release-blocking behaviour in one binary.  Each
// criterion prints exactly one PASS/FAIL line; the exit code is the number of
// failures.  Tolerances are fixed here on purpose -- loosening them is a
// library regression, not a test problem.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "nlsc/classify.hpp"
#include "nlsc/dynamics.hpp"
#include "nlsc/exact.hpp"
#include "nlsc/grid.hpp"
#include "nlsc/groundstate.hpp"
#include "nlsc/params.hpp"
#include "nlsc/virial.hpp"

#include "oracle.hpp"

using namespace nlsc;

namespace {

int g_failures = 0;

template <typename Fn>
void run_criterion(int idx, const char* desc, Fn fn) {
    bool ok = false;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "criterion %d raised: %s\n", idx, e.what());
    }
    std::printf("criterion %d (%s): %s\n", idx, desc, ok ? "PASS" : "FAIL");
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double intercritical_alpha(int d) { return d == 3 ? 2.0 : (d == 4 ? 1.5 : 1.0); }

double lambda_of(int d) { return 0.25 * (d - 2) * (d - 2); }

// Shared parameter box: both critical exponent families and four couplings in
// each dimension; positive couplings use the radial branch.
struct BoxCell {
    ModelParams params;
    GroundState gs;
};

const std::vector<BoxCell>& parameter_box() {
    static const std::vector<BoxCell> cells = [] {
        std::vector<BoxCell> out;
        for (int d : {3, 4, 5}) {
            const auto grid = build_grid(d, 30.0, 4000);
            for (double alpha : {4.0 / d, intercritical_alpha(d)})
                for (double c : {-0.5 * lambda_of(d), -0.1, 0.5, 1.0}) {
                    const auto p = make_model_params(d, alpha, c);
                    out.push_back({p, shoot_ground_state(p, grid, c > 0.0)});
                }
        }
        return out;
    }();
    return cells;
}

bool crit_stationarity() {
    bool ok = true;
    for (const auto& cell : parameter_box()) {
        const auto res = pohozaev_residual(cell.gs);
        ok = ok && std::fabs(res.first) < 1e-4 && std::fabs(res.second) < 1e-4;
    }
    return ok;
}

bool crit_ascent() {
    bool ok = true;
    for (const auto& cell : parameter_box()) {
        const auto init = field_from(cell.gs.profile.grid,
                                     [](double r) { return std::exp(-0.5 * r * r); });
        const auto best = maximize_weinstein(cell.params, init, 2000);
        ok = ok && std::fabs(best.second - cell.gs.c_gn) <= 1e-3 * std::fabs(cell.gs.c_gn);
    }
    return ok;
}

bool crit_threshold_identities() {
    bool ok = true;
    for (int d : {3, 4, 5}) {
        const double alpha = intercritical_alpha(d);
        for (double c : {-0.5 * lambda_of(d), -0.1, 0.5, 1.0}) {
            const auto p = make_model_params(d, alpha, c);
            const auto th = c > 0.0 ? thresholds_radial(p) : thresholds(p);
            const double k = th.require_k();
            const double h = th.require_h();
            const double da = d * alpha;
            ok = ok && std::fabs(f_func(k, p, th.require_c_gn()) - h) <= 1e-12 * std::fabs(h);
            ok = ok && std::fabs(h - (da - 4.0) / (2.0 * da) * k * k) <= 1e-12 * std::fabs(h);
        }
    }
    return ok;
}

struct PropagationRun {
    double err, mass_drift, energy_drift;
};

PropagationRun propagate_standing(int n, double dt0) {
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto grid = build_grid(3, 30.0, n);
    const auto gs = shoot_ground_state(p, grid);
    EvolveControls ctl;
    ctl.dt0 = dt0;
    ctl.adapt = false;
    ctl.t_end = 1.0;
    const auto traj = evolve(gs.profile, p, ctl);
    const auto exact = standing_wave(gs, traj.snaps.back().t);
    Field diff = traj.final_state;
    for (size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= exact.v[i];
    diff.is_real = false;
    const double m0 = traj.snaps.front().mass;
    const double e0 = traj.snaps.front().energy;
    const double k0 = traj.snaps.front().h1c_sq;
    PropagationRun out;
    out.err = std::sqrt(mass(diff) / m0);
    out.mass_drift = std::fabs(traj.snaps.back().mass - m0) / m0;
    out.energy_drift =
        std::fabs(traj.snaps.back().energy - e0) / std::max(std::fabs(e0), 1e-3 * k0);
    return out;
}

bool crit_propagation() {
    const auto base = propagate_standing(4000, 1e-4);
    const auto fine = propagate_standing(8000, 5e-5);
    return base.err < 1e-3 && base.mass_drift < 1e-10 && base.energy_drift < 1e-6 &&
           base.err / fine.err >= 3.5;
}

double virial_fd_max(const Trajectory& traj, const ModelParams& p) {
    const auto& s = traj.snaps;
    double worst = 0.0;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
        const double h = 0.5 * (s[i + 1].t - s[i - 1].t);
        const double d2 = (s[i + 1].v_x2 - 2.0 * s[i].v_x2 + s[i - 1].v_x2) / (h * h);
        const double rhs =
            8.0 * s[i].h1c_sq - 4.0 * p.d * p.alpha / (p.alpha + 2.0) * s[i].l_ap2;
        const double scale = std::max(std::fabs(rhs), 1e-2 * 8.0 * s[i].h1c_sq);
        worst = std::max(worst, std::fabs(d2 - rhs) / scale);
    }
    return worst;
}

bool crit_virial_flow() {
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto grid = build_grid(3, 30.0, 4000);
    const auto gs = shoot_ground_state(p, grid);
    EvolveControls ctl;
    ctl.dt0 = 1e-3;
    ctl.adapt = false;
    ctl.snapshot_stride = 10;
    ctl.t_end = 1.0;
    const auto standing = evolve(gs.profile, p, ctl);
    ctl.t_end = 0.5;
    const auto gauss = field_from(grid, [](double r) { return std::exp(-0.5 * r * r); });
    const auto spreading = evolve(gauss, p, ctl);
    const double rhs_q = std::fabs(global_virial_rhs(gs.profile, p));
    const double k_q = h1c_seminorm_sq(gs.profile, p);
    return virial_fd_max(standing, p) <= 1e-2 && virial_fd_max(spreading, p) <= 1e-2 &&
           rhs_q < 1e-4 * k_q;
}

bool crit_conformal_family() {
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    bool ok = true;
    {
        const auto grid = build_grid(3, 30.0, 16000);
        const auto gs = shoot_ground_state(p, grid);
        const double m0 = mass(gs.profile);
        for (double t : {0.0, 0.25, 0.5})
            ok = ok && std::fabs(mass(pseudo_conformal(gs, 1.0, t)) - m0) <= 1e-8 * m0;
    }
    const auto grid = build_grid(3, 30.0, 4000);
    const auto gs = shoot_ground_state(p, grid);
    {
        const std::vector<double> ss{0.5, 0.25, 0.125, 0.0625};
        std::vector<double> ks;
        for (double s : ss)
            ks.push_back(h1c_seminorm_sq(pseudo_conformal(gs, 1.0, 1.0 - s), p));
        for (size_t i = 0; i + 1 < ss.size(); ++i) {
            const double slope =
                std::log(std::sqrt(ks[i + 1] / ks[i])) / std::log(ss[i + 1] / ss[i]);
            ok = ok && slope >= -1.1 && slope <= -0.9;
        }
    }
    {
        EvolveControls ctl;
        ctl.dt0 = 2e-4;
        ctl.t_end = 1.5;
        const auto traj = evolve(pseudo_conformal(gs, 1.0, 0.0), p, ctl);
        ok = ok && traj.verdict == EvolveVerdict::BlowupDetected &&
             std::fabs(traj.t_blowup_estimate - 1.0) <= 0.1;
    }
    return ok;
}

bool crit_sweep() {
    SweepConfig cfg;
    cfg.ds = {3};
    cfg.alphas = {4.0 / 3.0};
    cfg.cs = {-0.1};
    cfg.lambdas = {0.8, 0.9, 1.1, 1.2};
    cfg.n = 2048;
    cfg.r_max = 30.0;
    cfg.workers = 4;
    cfg.controls.dt0 = 1e-3;
    cfg.controls.t_end = 50.0;
    cfg.controls.snapshot_stride = 20;
    const auto rep = sweep(cfg);  // throws on any verifiable contradiction
    bool ok = rep.rows.size() == 4;
    const double lams[] = {0.8, 0.9, 1.1, 1.2};
    for (size_t i = 0; ok && i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        ok = ok && row.agree;
        if (lams[i] <= 0.9) {
            ok = ok && row.prediction == Prediction::GlobalGuaranteed;
        } else {
            ok = ok && row.energy < 0.0 &&
                 row.prediction == Prediction::BlowupGuaranteed &&
                 row.simulated == EvolveVerdict::BlowupDetected;
        }
    }
    // the guaranteed-global orbits must also stay bounded under direct runs
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto grid = build_grid(3, 30.0, 2048);
    const auto gs = shoot_ground_state(p, grid);
    for (double lam : {0.8, 0.9}) {
        Field u0 = gs.profile;
        for (auto& z : u0.v) z *= lam;
        EvolveControls ctl;
        ctl.dt0 = 1e-3;
        ctl.t_end = 50.0;
        ctl.snapshot_stride = 20;
        const auto traj = evolve(u0, p, ctl);
        double kmax = 0.0;
        for (const auto& s : traj.snaps) kmax = std::max(kmax, s.h1c_sq);
        ok = ok && kmax <= 2.0 * traj.snaps.front().h1c_sq;
    }
    return ok;
}

bool crit_cutoff_positivity() {
    const auto prof = build_theta();
    bool ok = true;
    for (int d : {3, 4, 5}) {
        const auto grid = build_grid(d, 30.0, 1024);
        const double eps_d =
            0.5 * (d + 2) * std::pow(1.0 + (d - 1) / (3.0 * std::sqrt(3.0)), -0.5 * d);
        for (double R : {2.0, 10.0, 50.0}) {
            const auto w = build_phi_r(prof, R, grid);
            ok = ok && positivity_margin(w, d, eps_d) >= -1e-12;
            ok = ok && positivity_margin(w, d, 10.0 * eps_d) < 0.0;
        }
    }
    return ok;
}

bool crit_form_floors() {
    bool ok = true;
    for (int d : {3, 4, 5}) {
        const auto grid = build_grid(d, 30.0, 2048);
        std::mt19937_64 rng(1234u + static_cast<unsigned>(d));
        for (int i = 0; i < 1000 && ok; ++i) {
            const auto f = oracle::random_field(grid, rng);
            const double k = grad_sq(f);
            ok = ok && hardy_residual(f) >= -1e-8 * k;
            ok = ok && h1c_seminorm_sq(f, -0.99 * lambda_of(d)) >= -1e-8 * k;
        }
    }
    return ok;
}

bool crit_collapse_data() {
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto grid = build_grid(3, 20.0, 4000);
    const auto bump = default_bump(grid, 0.5);
    bool ok = true;
    for (double target : {0.1, 1.0}) {
        const auto bd = positive_energy_blowup_data(p, target, bump);
        ok = ok && std::fabs(bd.measured_energy - target) <= 1e-6 * target;
        ok = ok && bd.margin > 0.0;
        EvolveControls ctl;
        ctl.dt0 = 2e-4;
        ctl.t_end = 2.0;
        ctl.snapshot_stride = 10;
        const auto traj = evolve(bd.field, p, ctl);
        ok = ok && traj.verdict == EvolveVerdict::BlowupDetected;
    }
    return ok;
}

}  // namespace

int main() {
    run_criterion(1, "stationarity residuals across the parameter box", crit_stationarity);
    run_criterion(2, "interpolation constant agrees with direct ascent", crit_ascent);
    run_criterion(3, "threshold level identities", crit_threshold_identities);
    run_criterion(4, "standing-wave propagation accuracy and convergence", crit_propagation);
    run_criterion(5, "virial identity tracked along simulated flows", crit_virial_flow);
    run_criterion(6, "conformal collapse family: mass, rate, detector", crit_conformal_family);
    run_criterion(7, "sweep predictions consistent with simulation", crit_sweep);
    run_criterion(8, "cutoff curvature positivity brackets", crit_cutoff_positivity);
    run_criterion(9, "quadratic-form floors on random data", crit_form_floors);
    run_criterion(10, "prescribed-energy collapse data", crit_collapse_data);
    if (g_failures == 0) std::printf("all criteria passed\n");
    else std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures;
}
