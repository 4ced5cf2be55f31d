#include <catch2/catch_amalgamated.hpp>

#include "nlsc/errors.hpp"
#include "nlsc/grid.hpp"
#include "nlsc/groundstate.hpp"
#include "nlsc/params.hpp"

#include "oracle.hpp"

using namespace nlsc;
using oracle::rel;

namespace {

Field gauss_init(const GridPtr& g, double a = 1.0, double w = 1.0) {
    return field_from(g, [=](double r) { return a * std::exp(-r * r / (2 * w * w)); });
}

// invert the sharp interpolation constant back to the bound-state mass
double mass_from_constant(const ModelParams& p, double j) {
    const double num = 4.0 - (p.d - 2) * p.alpha;
    const double da = p.d * p.alpha;
    const double a = da / num, b = 2.0 * (p.alpha + 2.0) / num;
    return std::pow(b * std::pow(a, -0.25 * da) / j, 2.0 / p.alpha);
}

}  // namespace

TEST_CASE("bound state solves its variational problem") {
    const auto g = build_grid(3, 30.0, 2048);
    const auto p = make_model_params(3, 2.0, 0.0);
    const auto gs = shoot_ground_state(p, g);
    CHECK(gs.amplitude > 0.0);
    CHECK(gs.norms.mass > 0.0);
    CHECK(rel(mass_from_constant(p, gs.c_gn), gs.norms.mass) < 1e-3);
    CHECK(rel(weinstein_value(gs.profile, p), gs.c_gn) < 1e-3);
}

TEST_CASE("stationarity residuals at scale") {
    const auto g = build_grid(3, 30.0, 4000);
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto gs = shoot_ground_state(p, g);
    CHECK(gs.pohozaev_residuals.first < 1e-4);
    CHECK(gs.pohozaev_residuals.second < 1e-4);
    const auto rr = pohozaev_residual(gs);
    CHECK(rr.first < 1e-4);
    CHECK(rr.second < 1e-4);
}

TEST_CASE("construction guards") {
    const auto g = build_grid(3, 30.0, 512);
    CHECK_THROWS_AS(make_model_params(3, 2.0, -0.25), CouplingOutOfRange);
    CHECK_THROWS_AS(shoot_ground_state(make_model_params(3, 4.0, -0.1), g),
                    RegimeMismatch);
    const auto g4 = build_grid(4, 30.0, 512);
    CHECK_THROWS_AS(shoot_ground_state(make_model_params(3, 2.0, -0.1), g4),
                    DimensionUnsupported);
    CHECK_THROWS_AS(shoot_ground_state(make_model_params(3, 4.0 / 3.0, -0.1), g, false,
                                       1e-15),
                    NotConverged);
}

TEST_CASE("perturbed profiles fail the identities") {
    const auto g = build_grid(3, 30.0, 2048);
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto gs = shoot_ground_state(p, g);
    const auto perturbed = [&](double lam, double mu) {
        GroundState g2 = gs;
        g2.profile = field_from(g, [&](double r) { return lam * gs.fine.value(mu * r); });
        g2.norms.mass = mass(g2.profile);
        g2.norms.h1c_sq = h1c_seminorm_sq(g2.profile, p.c);
        g2.norms.l_alpha_plus_2 = lp_pow(g2.profile, p.alpha + 2.0);
        return pohozaev_residual(g2);
    };
    // amplitude alone keeps the quadratic identity, breaks the nonlinear one
    const auto scaled = perturbed(1.1, 1.0);
    CHECK(scaled.first < 1e-4);
    CHECK(scaled.second > 0.1);
    // amplitude plus dilation breaks both
    const auto sheared = perturbed(1.1, 1.2);
    CHECK(sheared.first > 0.1);
    CHECK(sheared.second > 0.1);
}

TEST_CASE("explicit optimizers without square-integrable decay") {
    const auto g3 = build_grid(3, 30.0, 512);
    const auto p3 = make_model_params(3, 4.0, -0.1);
    const auto ws = explicit_w_state(p3, g3);
    CHECK(std::isinf(ws.norms.mass));
    CHECK_THROWS_AS(pohozaev_residual(ws), NotSquareIntegrable);
    CHECK_THROWS_AS(w_mass(p3), NotSquareIntegrable);
    CHECK_THROWS_AS(w_mass(make_model_params(4, 2.0, -0.1)), NotSquareIntegrable);
    const double m5 = w_mass(make_model_params(5, 4.0 / 3.0, -0.2));
    CHECK(m5 > 0.0);
    CHECK(std::isfinite(m5));
}

TEST_CASE("mass-critical constant from the invariant mass") {
    const auto g = build_grid(3, 30.0, 2048);
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto gs = shoot_ground_state(p, g);
    const auto closed = [&](double m) {
        return 0.5 * (p.alpha + 2.0) * std::pow(m, -0.5 * p.alpha);
    };
    const bool matches = rel(gs.c_gn, closed(gs.fine_norms.mass)) < 1e-12 ||
                         rel(gs.c_gn, closed(gs.norms.mass)) < 1e-12;
    CHECK(matches);
    CHECK(rel(gn_constant(gs), gs.c_gn) < 1e-12);
}

TEST_CASE("ascent reaches the shooting constant") {
    const auto g = build_grid(3, 30.0, 2048);
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto gs = shoot_ground_state(p, g);
    const auto [f, j] = maximize_weinstein(p, gauss_init(g), 2000);
    CHECK(rel(j, gs.c_gn) < 1e-3);
}

TEST_CASE("ascent agrees across initializations") {
    const auto g = build_grid(3, 30.0, 2048);
    const auto p = make_model_params(3, 4.0 / 3.0, -0.1);
    const auto [f1, j1] = maximize_weinstein(p, gauss_init(g), 2000);
    const auto [f2, j2] = maximize_weinstein(p, gauss_init(g, 0.5, 2.0), 2000);
    CHECK(rel(j1, j2) < 1e-6);
    const auto supinv = [&](const Field& f) {
        double s = 0;
        for (const auto& z : f.v) s = std::max(s, std::abs(z));
        return s * std::pow(mass(f), 0.25 * (p.d - 2)) *
               std::pow(h1c_seminorm_sq(f, p), -0.25 * p.d);
    };
    CHECK(rel(supinv(f1), supinv(f2)) < 1e-3);
}

TEST_CASE("quotient invariances and guards") {
    const auto g = build_grid(3, 30.0, 4000);
    const auto p = make_model_params(3, 2.0, -0.1);
    const auto f = gauss_init(g);
    const auto f2 = field_from(g, [](double r) { return 2.0 * std::exp(-4.5 * r * r); });
    CHECK(rel(weinstein_value(f, p), weinstein_value(f2, p)) < 1e-3);
    CHECK_THROWS_AS(weinstein_value(zero_field(g), p), ZeroField);
    CHECK_THROWS_AS(maximize_weinstein(p, zero_field(g)), ZeroField);
}

TEST_CASE("radial constraint at repulsive coupling") {
    const auto g = build_grid(3, 30.0, 1024);
    const auto pr = make_model_params(3, 4.0 / 3.0, 1.0);
    const auto p0 = make_model_params(3, 4.0 / 3.0, 0.0);
    const auto gs0 = shoot_ground_state(p0, g);
    const auto [fr, jr] = maximize_weinstein(pr, gauss_init(g), 2000);
    CHECK(jr < gs0.c_gn * (1.0 - 1e-3));

    // the unconstrained problem projects to the attractive side
    const auto pp = make_model_params(3, 4.0 / 3.0, 0.5);
    const auto gsp = shoot_ground_state(pp, g, /*radial_only=*/false);
    CHECK(gsp.params_used.c == 0.0);
    CHECK(rel(gsp.c_gn, gs0.c_gn) < 1e-12);
    const auto gsr = shoot_ground_state(pp, g, /*radial_only=*/true);
    CHECK(gsr.params_used.c == 0.5);
    CHECK(gsr.c_gn < gs0.c_gn);
}

TEST_CASE("threshold bundle per regime") {
    const auto tm = thresholds(make_model_params(3, 4.0 / 3.0, -0.1));
    CHECK(tm.require_q_mass() > 0.0);
    CHECK_THROWS_AS(tm.require_h(), RegimeMismatch);
    CHECK_THROWS_AS(tm.require_w_energy(), RegimeMismatch);

    const auto p = make_model_params(3, 2.0, -0.1);
    const auto ti = thresholds(p);
    const double k = ti.require_k(), h = ti.require_h();
    const double da = p.d * p.alpha;
    CHECK(rel(h, (da - 4.0) / (2.0 * da) * k * k) < 1e-12);
    CHECK_THROWS_AS(ti.require_q_mass(), RegimeMismatch);

    // pipeline-level constants land on the same thresholds on two meshes
    for (int n : {2048, 4096}) {
        const auto g = build_grid(3, 30.0, n);
        const auto gs = shoot_ground_state(p, g);
        const double kpipe = std::pow(da / (2.0 * (p.alpha + 2.0)) * gs.c_gn,
                                      -2.0 / (da - 4.0));
        CHECK(rel(kpipe, k) < 1e-3);
    }
}

TEST_CASE("radial thresholds sit strictly above the projected ones") {
    const auto p = make_model_params(3, 2.0, 1.0);
    const auto tr = thresholds_radial(p);
    const auto tu = thresholds(p);
    CHECK(tr.radial_branch);
    CHECK_FALSE(tu.radial_branch);
    CHECK(tr.require_k() > 1.5 * tu.require_k());
    CHECK(tr.require_h() > 2.0 * tu.require_h());
    CHECK(tr.require_c_gn() < tu.require_c_gn());
}

TEST_CASE("energy-critical thresholds and embedding constants") {
    const auto p5 = make_model_params(5, 4.0 / 3.0, -0.2);
    const auto th = thresholds_radial(p5);
    const double wn = th.require_w_h1c();
    CHECK(rel(th.require_w_energy(), wn * wn / 5.0) < 1e-12);

    const auto p30 = make_model_params(3, 4.0, 0.0);
    CHECK(rel(sobolev_constants(p30), oracle::kBubble3Embed) < 1e-12);
    const double cse5 = sobolev_constants(p5);
    CHECK(cse5 > 0.25);
    CHECK(cse5 < 0.29);

    // radial-constrained constant is strictly smaller at repulsive coupling
    const auto prad = make_model_params(3, 4.0, 1.0);
    CHECK(sobolev_constants(prad) < sobolev_constants(p30) * (1.0 - 1e-3));

    CHECK_THROWS_AS(sobolev_constants(make_model_params(3, 4.0, -0.2495)),
                    TailNotResolved);
}

TEST_CASE("explicit optimizer closed forms") {
    const auto g = build_grid(5, 30.0, 512);
    const auto p = make_model_params(5, 4.0 / 3.0, 0.0);
    const auto W = explicit_w(p, g);
    const double lam = std::pow(15.0, 0.75);
    for (int j = 0; j < g->n; j += 37) {
        const double r = g->r[j];
        CHECK(rel(W.v[j].real(), lam * std::pow(1.0 + r * r, -1.5)) < 1e-12);
    }
    CHECK_THROWS_AS(make_model_params(5, 4.0 / 3.0, -2.25), CouplingOutOfRange);
}

TEST_CASE("explicit optimizer flux identity on a wide domain") {
    const auto g = build_grid(5, 300.0, 20000);
    const auto p = make_model_params(5, 4.0 / 3.0, -0.2);
    const auto W = explicit_w(p, g);
    const double k = h1c_seminorm_sq(W, p.c);
    CHECK(rel(k, lp_pow(W, p.alpha + 2.0)) < 6e-3);
    CHECK(rel(energy(W, p), k / p.d) < 1e-2);
}

TEST_CASE("energy identity of the bound state") {
    const auto g = build_grid(3, 30.0, 2048);
    const auto p = make_model_params(3, 2.0, -0.1);
    const auto gs = shoot_ground_state(p, g);
    const double da = p.d * p.alpha;
    CHECK(rel(energy(gs.profile, p), (da - 4.0) / (2.0 * da) * gs.norms.h1c_sq) < 1e-3);
}
