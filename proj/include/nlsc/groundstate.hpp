#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlsc/errors.hpp"
#include "nlsc/grid.hpp"
#include "nlsc/params.hpp"
#include "nlsc/profile.hpp"

namespace nlsc {

struct GroundStateNorms {
    double mass = 0.0;           // squared L^2 norm
    double h1c_sq = 0.0;         // squared energy seminorm
    double l_alpha_plus_2 = 0.0; // integral of |q|^{alpha+2}
};

// Bound-state bundle.  `params` is the request, `params_used` the coupling the
// profile actually solves: for c > 0 without the radial restriction the
// relevant optimizer lives at the attractive-side coupling min(c, 0).
struct GroundState {
    ModelParams params{};
    ModelParams params_used{};
    bool radial_flag = false;
    double amplitude = 0.0;      // v(r0) of the converged shot
    RadialProfile fine;          // dense ODE mesh; empty for explicit states
    Field profile;               // sampled on the target grid
    GroundStateNorms norms{};
    GroundStateNorms fine_norms{};
    double c_gn = 0.0;
    std::pair<double, double> pohozaev_residuals{0.0, 0.0};
};

namespace detail {

constexpr double kShootR0 = 1e-4;
constexpr double kShootREnd = 40.0;
constexpr double kShootDrMin = 1e-5;
constexpr double kShootDrMax = 1e-3;
constexpr double kGrowCap = 3.0;
constexpr double kTailCut = 1e-7;

enum class Shot { Over, Under };

// v'' = -(q/r) v' + v - r^{-rho alpha} |v|^alpha v, the bound-state equation
// after the q(r) = r^{-rho} v(r) substitution that removes the inverse-square
// singularity.
struct BoundStateOde {
    double q, alpha, nl_pow;
    void operator()(double r, double v, double w, double& dv, double& dw) const {
        dv = w;
        dw = -(q / r) * w + v - std::pow(r, nl_pow) * std::pow(std::fabs(v), alpha) * v;
    }
};

inline Shot integrate_v(const BoundStateOde& rhs, double a, std::vector<double>* rr,
                        std::vector<double>* vv, std::vector<double>* ww) {
    double r = kShootR0, v = a, w = 0.0;
    if (rr) {
        rr->clear(); vv->clear(); ww->clear();
        rr->push_back(r); vv->push_back(v); ww->push_back(w);
    }
    const double cap = kGrowCap * a;
    double k1v, k1w, k2v, k2w, k3v, k3w, k4v, k4w;
    while (r < kShootREnd) {
        const double dr = std::min(kShootDrMax, std::max(r / 8.0, kShootDrMin));
        rhs(r, v, w, k1v, k1w);
        rhs(r + 0.5 * dr, v + 0.5 * dr * k1v, w + 0.5 * dr * k1w, k2v, k2w);
        rhs(r + 0.5 * dr, v + 0.5 * dr * k2v, w + 0.5 * dr * k2w, k3v, k3w);
        rhs(r + dr, v + dr * k3v, w + dr * k3w, k4v, k4w);
        v += dr / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        w += dr / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        r += dr;
        if (rr) { rr->push_back(r); vv->push_back(v); ww->push_back(w); }
        if (v <= 0.0) return Shot::Over;
        if (v >= cap) return Shot::Under;
    }
    return Shot::Under;
}

struct FineSolution {
    RadialProfile prof;
    double amplitude = 0.0;
    GroundStateNorms norms{};
};

// Shooting on the amplitude a = v(r0): overshoots cross zero, undershoots
// turn back up.  Bisection to relative width 1e-15, then one dense pass on
// the non-crossing side, cut to an exponential tail once |q| has dropped
// seven decades below its peak.
inline FineSolution shoot_fine(const ModelParams& p) {
    const double q = p.d - 1 - 2.0 * p.rho;
    const BoundStateOde rhs{q, p.alpha, -p.rho * p.alpha};
    double a = 1.0, lo = 0.0, hi = 0.0;
    if (integrate_v(rhs, a, nullptr, nullptr, nullptr) == Shot::Under) {
        lo = a;
        for (int i = 0;; ++i) {
            if (i >= 200) throw ShootingBracketFailed("no overshoot amplitude found");
            a *= 2.0;
            if (integrate_v(rhs, a, nullptr, nullptr, nullptr) == Shot::Over) { hi = a; break; }
            lo = a;
        }
    } else {
        hi = a;
        for (int i = 0;; ++i) {
            if (i >= 200) throw ShootingBracketFailed("no undershoot amplitude found");
            a *= 0.5;
            if (integrate_v(rhs, a, nullptr, nullptr, nullptr) == Shot::Under) { lo = a; break; }
            hi = a;
        }
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (integrate_v(rhs, mid, nullptr, nullptr, nullptr) == Shot::Under ? lo : hi) = mid;
    }

    FineSolution out;
    out.amplitude = lo;
    auto& pr = out.prof;
    pr.d = p.d;
    pr.rho = p.rho;
    integrate_v(rhs, lo, &pr.r, &pr.v, &pr.dv);

    const auto m = pr.r.size();
    std::vector<double> qv(m);
    for (size_t i = 0; i < m; ++i) qv[i] = pr.v[i] * std::pow(pr.r[i], -p.rho);
    size_t ipk = 0;
    for (size_t i = 1; i < m; ++i)
        if (std::fabs(qv[i]) > std::fabs(qv[ipk])) ipk = i;
    size_t itail = m - 1;
    for (size_t i = ipk + 1; i < m; ++i)
        if (std::fabs(qv[i]) < kTailCut * std::fabs(qv[ipk])) { itail = i; break; }
    pr.r_tail = pr.r[itail];
    pr.q_tail = qv[itail];

    // Dense-mesh quadrature: trapezoid on the stored mesh plus closed-form
    // head (power behavior below r0) and tail (exponential continuation).
    const double ap2 = p.alpha + 2.0;
    const double qexp = q;  // face weight exponent d-1-2 rho
    double sm = 0.0, sk = 0.0, sp = 0.0;
    auto mint = [&](size_t i) { return qv[i] * qv[i] * std::pow(pr.r[i], p.d - 1); };
    auto kint = [&](size_t i) { return pr.dv[i] * pr.dv[i] * std::pow(pr.r[i], qexp); };
    auto pint = [&](size_t i) {
        return std::pow(std::fabs(qv[i]), ap2) * std::pow(pr.r[i], p.d - 1);
    };
    for (size_t i = 0; i + 1 <= itail && i + 1 < m; ++i) {
        const double dr = pr.r[i + 1] - pr.r[i];
        sm += 0.5 * dr * (mint(i) + mint(i + 1));
        sk += 0.5 * dr * (kint(i) + kint(i + 1));
        sp += 0.5 * dr * (pint(i) + pint(i + 1));
    }
    const double r0 = pr.r.front(), v0 = pr.v.front();
    sm += v0 * v0 * std::pow(r0, p.d - 2.0 * p.rho) / (p.d - 2.0 * p.rho);
    sp += std::pow(std::fabs(v0), ap2) * std::pow(r0, p.d - p.rho * ap2) /
          (p.d - p.rho * ap2);
    const double rt = pr.r_tail, qt = pr.q_tail;
    const double slope = 1.0 + 0.5 * (p.d - 1) / rt;
    sm += qt * qt * std::pow(rt, p.d - 1) / 2.0;
    sp += std::pow(std::fabs(qt), ap2) * std::pow(rt, p.d - 1) / ap2;
    sk += qt * qt * std::pow(rt, p.d - 1) * (slope * slope + p.c / (rt * rt)) / 2.0;

    const double omega = sphere_area(p.d);
    out.norms.mass = omega * sm;
    out.norms.h1c_sq = omega * sk;
    out.norms.l_alpha_plus_2 = omega * sp;
    return out;
}

inline std::pair<double, double> pohozaev_pair(const ModelParams& p,
                                               const GroundStateNorms& n) {
    const double num = 4.0 - (p.d - 2) * p.alpha;
    const double k1 = num / (p.d * p.alpha);
    const double k2 = num / (2.0 * (p.alpha + 2.0));
    return {std::fabs(n.mass - k1 * n.h1c_sq) / n.mass,
            std::fabs(n.mass - k2 * n.l_alpha_plus_2) / n.mass};
}

inline double gn_from_mass(const ModelParams& p, double mass) {
    const double num = 4.0 - (p.d - 2) * p.alpha;
    const double da = p.d * p.alpha;
    return 2.0 * (p.alpha + 2.0) / num * std::pow(num / da, 0.25 * da) *
           std::pow(mass, -0.5 * p.alpha);
}

}  // namespace detail

inline GroundState shoot_ground_state(const ModelParams& params, const GridPtr& grid,
                                      bool radial_only = false, double tol = 1e-6) {
    if (regime_of(params) == Regime::EnergyCritical)
        throw RegimeMismatch("no finite-mass bound state at the energy-critical exponent");
    if (grid->d != params.d)
        throw DimensionUnsupported("grid and model dimensions disagree");

    GroundState gs;
    gs.params = params;
    gs.params_used = (params.c > 0.0 && !radial_only) ? with_c_bar(params) : params;
    gs.radial_flag = radial_only;

    auto fine = detail::shoot_fine(gs.params_used);
    gs.fine_norms = fine.norms;
    auto fres = detail::pohozaev_pair(gs.params_used, fine.norms);
    if (!(std::max(fres.first, fres.second) <= tol))
        throw NotConverged("bound-state residual " +
                           std::to_string(std::max(fres.first, fres.second)) +
                           " above tolerance");
    gs.amplitude = fine.amplitude;
    gs.fine = std::move(fine.prof);

    gs.profile = field_from(grid, [&](double r) { return gs.fine.value(r); });
    gs.norms.mass = mass(gs.profile);
    gs.norms.h1c_sq = h1c_seminorm_sq(gs.profile, gs.params_used);
    gs.norms.l_alpha_plus_2 = lp_pow(gs.profile, gs.params_used.alpha + 2.0);
    gs.c_gn = detail::gn_from_mass(gs.params_used, gs.norms.mass);
    gs.pohozaev_residuals = detail::pohozaev_pair(gs.params_used, gs.norms);
    return gs;
}

inline std::pair<double, double> pohozaev_residual(const GroundState& gs) {
    if (!std::isfinite(gs.norms.mass))
        throw NotSquareIntegrable("profile has no finite mass");
    return detail::pohozaev_pair(gs.params_used, gs.norms);
}

inline double gn_constant(const GroundState& gs) {
    if (!std::isfinite(gs.norms.mass))
        throw NotSquareIntegrable("profile has no finite mass");
    return detail::gn_from_mass(gs.params_used, gs.norms.mass);
}

inline double weinstein_value(const Field& f, const ModelParams& params) {
    const double m = mass(f);
    if (!(m > 0.0)) throw ZeroField("functional undefined at the zero field");
    const double k = h1c_seminorm_sq(f, params);
    if (!(k > 0.0)) throw ZeroField("functional undefined at constant fields");
    const double p = lp_pow(f, params.alpha + 2.0);
    const double pm = 0.25 * (4.0 - (params.d - 2) * params.alpha);
    const double pk = 0.25 * params.d * params.alpha;
    return p / (std::pow(m, pm) * std::pow(k, pk));
}

namespace detail {

// Even-symmetric cubic interpolation of node values on the staggered grid;
// zero beyond the last node, r^2-linear below the first.
inline double eval_even_cubic(const RadialGrid& g, const std::vector<double>& f, double rr) {
    const int n = g.n;
    if (rr >= g.r[n - 1]) return 0.0;
    if (rr <= g.r[0]) {
        const double t = (rr * rr - g.r[0] * g.r[0]) / (g.r[1] * g.r[1] - g.r[0] * g.r[0]);
        return f[0] + (f[1] - f[0]) * t;
    }
    const int j = std::min(n - 2, static_cast<int>((rr - g.r[0]) / g.h));
    const double t = (rr - g.r[j]) / g.h;
    auto slope = [&](int i) {
        if (i == 0) return (f[1] - f[0]) / (2.0 * g.h);
        if (i == n - 1) return (0.0 - f[n - 2]) / (2.0 * g.h);
        return (f[i + 1] - f[i - 1]) / (2.0 * g.h);
    };
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f[j] + (t3 - 2 * t2 + t) * g.h * slope(j) +
           (-2 * t3 + 3 * t2) * f[j + 1] + (t3 - t2) * g.h * slope(j + 1);
}

inline void thomas_real(const std::vector<double>& sub, std::vector<double> dia,
                        const std::vector<double>& sup, std::vector<double>& rhs) {
    const size_t n = dia.size();
    for (size_t i = 1; i < n; ++i) {
        const double w = sub[i] / dia[i - 1];
        dia[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= dia[n - 1];
    for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / dia[i];
}

}  // namespace detail

// Gradient ascent on the interpolation quotient, preconditioned by the
// resolvent of the quadratic-form operator; rescales back to the canonical
// mass = seminorm point whenever the iterate drifts from it.
inline std::pair<Field, double> maximize_weinstein(const ModelParams& params,
                                                   const Field& init,
                                                   int max_iters = 500) {
    const auto& g = *init.grid;
    if (g.d != params.d) throw DimensionUnsupported("grid and model dimensions disagree");
    const int n = g.n;
    std::vector<double> f(n);
    double amax = 0.0;
    for (int j = 0; j < n; ++j) {
        f[j] = std::abs(init.v[j]);
        amax = std::max(amax, f[j]);
    }
    if (!(amax > 0.0)) throw ZeroField("cannot ascend from the zero field");

    const auto op = make_pc_operator(init.grid, params);
    const double ap2 = params.alpha + 2.0;
    const double pm = 0.25 * (4.0 - (params.d - 2) * params.alpha);
    const double pk = 0.25 * params.d * params.alpha;
    const double qexp = params.d - 1 - 2.0 * params.rho;
    std::vector<double> rpow(n), wf(n + 1);
    for (int j = 0; j < n; ++j) rpow[j] = std::pow(g.r[j], params.rho);
    for (int k = 0; k <= n; ++k) wf[k] = g.omega * g.h * std::pow(k * g.h, qexp);

    struct N { double m, k, p; };
    auto norms_of = [&](const std::vector<double>& u) {
        N o{0, 0, 0};
        for (int j = 0; j < n; ++j) {
            o.m += g.w[j] * u[j] * u[j];
            o.p += g.w[j] * std::pow(std::fabs(u[j]), ap2);
        }
        for (int k = 1; k <= n; ++k) {
            const double va = rpow[k - 1] * u[k - 1];
            const double vb = (k < n) ? rpow[k] * u[k] : 0.0;
            const double dd = (vb - va) / g.h;
            o.k += wf[k] * dd * dd;
        }
        return o;
    };
    auto jval = [&](const N& o) { return o.p / (std::pow(o.m, pm) * std::pow(o.k, pk)); };

    N cur = norms_of(f);
    if (!(cur.m > 0.0) || !(cur.k > 0.0)) throw ZeroField("cannot ascend from the zero field");
    double J = jval(cur), step = 1.0;
    std::vector<double> grad(n), hf(n), trial(n), dia1(n);
    int small_steps = 0;
    bool converged = false;

    for (int it = 0; it < max_iters && !converged; ++it) {
        const double mu = std::sqrt(cur.m / cur.k);
        if (std::fabs(mu - 1.0) > 0.05) {
            const double lam =
                std::pow(cur.m, 0.25 * params.d - 0.5) / std::pow(cur.k, 0.25 * params.d);
            std::vector<double> rs(n);
            for (int j = 0; j < n; ++j) rs[j] = lam * detail::eval_even_cubic(g, f, mu * g.r[j]);
            f = std::move(rs);
            cur = norms_of(f);
            J = jval(cur);
        }
        for (int j = 0; j < n; ++j) {
            const Complex hc = (j > 0 ? op.sub[j] * Complex(f[j - 1]) : Complex(0)) +
                               op.dia[j] * Complex(f[j]) +
                               (j + 1 < n ? op.sup[j] * Complex(f[j + 1]) : Complex(0));
            hf[j] = hc.real();
        }
        for (int j = 0; j < n; ++j)
            grad[j] = ap2 * std::pow(std::fabs(f[j]), params.alpha) * f[j] / cur.p -
                      2.0 * pm * f[j] / cur.m - 2.0 * pk * hf[j] / cur.k;
        for (int j = 0; j < n; ++j) dia1[j] = op.dia[j] + 1.0;
        detail::thomas_real(op.sub, dia1, op.sup, grad);

        double s = step;
        bool accepted = false;
        while (s > 1e-14) {
            for (int j = 0; j < n; ++j) trial[j] = f[j] + s * grad[j];
            const N tn = norms_of(trial);
            if (tn.m > 0.0 && tn.k > 0.0) {
                const double Jt = jval(tn);
                if (Jt > J) {
                    const double rel = (Jt - J) / J;
                    f.swap(trial);
                    cur = tn;
                    J = Jt;
                    step = std::min(s * 1.5, 1e3);
                    small_steps = (rel < 1e-10) ? small_steps + 1 : 0;
                    if (small_steps >= 2) converged = true;
                    accepted = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if (!accepted) converged = true;  // no ascent direction left at this resolution
    }
    if (!converged) throw NotConverged("ascent did not settle within the iteration budget");

    Field out = zero_field(init.grid);
    for (int j = 0; j < n; ++j) out.v[j] = f[j];
    return {std::move(out), J};
}

// Scale-invariant threshold bundle.  Which members are populated depends on
// the regime; the require_* accessors fault loudly instead of handing back a
// meaningless number.
struct Thresholds {
    Regime regime{};
    double c_bar = 0.0;
    bool radial_branch = false;
    std::optional<double> h_c, k_c;        // intercritical levels
    std::optional<double> w_energy, w_h1c; // energy-critical: E(W) and ||W|| (norm)
    std::optional<double> q_mass;          // mass-critical: ||Q|| (norm)
    std::optional<double> c_gn_used;       // interpolation constant behind h_c/k_c

    double require_h() const { return req(h_c, "h_c"); }
    double require_k() const { return req(k_c, "k_c"); }
    double require_w_energy() const { return req(w_energy, "w_energy"); }
    double require_w_h1c() const { return req(w_h1c, "w_h1c"); }
    double require_q_mass() const { return req(q_mass, "q_mass"); }
    double require_c_gn() const { return req(c_gn_used, "c_gn_used"); }

  private:
    static double req(const std::optional<double>& v, const char* name) {
        if (!v) throw RegimeMismatch(std::string(name) + " is undefined in this regime");
        return *v;
    }
};

namespace detail {

struct WQuad {
    double h1c = 0.0;    // squared seminorm of the explicit optimizer
    double lcrit = 0.0;  // integral of |W|^{2d/(d-2)}
};

inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

// Log-radius quadrature of the explicit optimizer's integrals; both
// integrands decay like exp(-beta(d-2)|s|), so the range scales with the
// reciprocal rate.
inline WQuad w_quadrature(const ModelParams& p) {
    const double beta = p.beta, d = p.d;
    const double rate = beta * (d - 2);
    if (rate < 0.05)
        throw TailNotResolved("optimizer tail decays too slowly to integrate");
    const double aw = std::pow(d * (d - 2) * beta * beta, 0.25 * (d - 2));
    const double smax = 45.0 / rate + 10.0;
    const double ds = 0.02;
    const int half = static_cast<int>(smax / ds);
    WQuad out;
    for (int i = -half; i <= half; ++i) {
        const double s = i * ds;
        const double lnu = (beta - 1.0) * s - softplus(2.0 * beta * s);
        const double sig = 1.0 / (1.0 + std::exp(-2.0 * beta * s));
        const double w2rd2 = aw * aw * std::exp((d - 2) * lnu + (d - 2) * s);
        const double ang = 0.5 * (d - 2) * ((beta - 1.0) - 2.0 * beta * sig);
        const double kint = w2rd2 * (ang * ang + p.c);
        const double lint = std::pow(aw, 2.0 * d / (d - 2)) * std::exp(d * (lnu + s));
        const double wt = (std::abs(i) == half) ? 0.5 : 1.0;
        out.h1c += wt * kint;
        out.lcrit += wt * lint;
    }
    const double omega = sphere_area(p.d);
    out.h1c *= omega * ds;
    out.lcrit *= omega * ds;
    return out;
}

}  // namespace detail

inline Thresholds thresholds_radial(const ModelParams& params) {
    Thresholds t;
    t.regime = regime_of(params);
    t.c_bar = params.c_bar;
    t.radial_branch = params.c > 0.0;
    const ModelParams pb = t.radial_branch ? params : with_c_bar(params);
    switch (t.regime) {
        case Regime::MassSubcritical:
            break;
        case Regime::MassCritical: {
            const auto fine = detail::shoot_fine(pb);
            t.q_mass = std::sqrt(fine.norms.mass);
            t.c_gn_used = detail::gn_from_mass(pb, fine.norms.mass);
            break;
        }
        case Regime::Intercritical: {
            const auto fine = detail::shoot_fine(pb);
            const double cgn = detail::gn_from_mass(pb, fine.norms.mass);
            const double da = pb.d * pb.alpha;
            const double k = std::pow(da / (2.0 * (pb.alpha + 2.0)) * cgn, -2.0 / (da - 4.0));
            t.k_c = k;
            t.h_c = (da - 4.0) / (2.0 * da) * k * k;
            t.c_gn_used = cgn;
            break;
        }
        case Regime::EnergyCritical: {
            const auto wq = detail::w_quadrature(pb);
            t.w_h1c = std::sqrt(wq.h1c);
            t.w_energy = 0.5 * wq.h1c - (pb.d - 2) / (2.0 * pb.d) * wq.lcrit;
            break;
        }
    }
    return t;
}

inline Thresholds thresholds(const ModelParams& params) {
    return thresholds_radial(with_c_bar(params));
}

inline Field explicit_w(const ModelParams& params, const GridPtr& grid) {
    if (grid->d != params.d) throw DimensionUnsupported("grid and model dimensions disagree");
    const double beta = params.beta, d = params.d;
    const double aw = std::pow(d * (d - 2) * beta * beta, 0.25 * (d - 2));
    return field_from(grid, [&](double r) {
        const double s = std::log(r);
        const double lnu = (beta - 1.0) * s - detail::softplus(2.0 * beta * s);
        return aw * std::exp(0.5 * (d - 2) * lnu);
    });
}

// Squared L^2 norm of the explicit optimizer; finite only when the far-field
// decay rate (beta+1)(d-2) beats the volume growth d.
inline double w_mass(const ModelParams& params) {
    const double beta = params.beta, d = params.d;
    const double rate_far = (beta + 1.0) * (d - 2) - d;
    if (rate_far <= 0.0)
        throw NotSquareIntegrable("explicit optimizer is not square integrable here");
    const double rate_near = (beta - 1.0) * (d - 2) + d;
    const double rate = std::min({rate_far, rate_near, beta * (d - 2)});
    if (rate < 0.05) throw TailNotResolved("mass integral converges too slowly");
    const double aw = std::pow(d * (d - 2) * beta * beta, 0.25 * (d - 2));
    const double smax = 45.0 / rate + 10.0;
    const double ds = 0.02;
    const int half = static_cast<int>(smax / ds);
    double acc = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double s = i * ds;
        const double lnu = (beta - 1.0) * s - detail::softplus(2.0 * beta * s);
        const double wt = (std::abs(i) == half) ? 0.5 : 1.0;
        acc += wt * aw * aw * std::exp((d - 2) * lnu + d * s);
    }
    return sphere_area(params.d) * acc * ds;
}

// GroundState-shaped view of the explicit optimizer, so the diagnostic
// operations can be pointed at it; mass is +inf when not square integrable.
inline GroundState explicit_w_state(const ModelParams& params, const GridPtr& grid) {
    GroundState gs;
    gs.params = params;
    gs.params_used = params;
    gs.radial_flag = params.c > 0.0;
    gs.profile = explicit_w(params, grid);
    double m = std::numeric_limits<double>::infinity();
    const double rate_far = (params.beta + 1.0) * (params.d - 2) - params.d;
    if (rate_far > 0.0) m = w_mass(params);
    const auto wq = detail::w_quadrature(params);
    gs.norms.mass = m;
    gs.norms.h1c_sq = h1c_seminorm_sq(gs.profile, params);
    gs.norms.l_alpha_plus_2 = lp_pow(gs.profile, params.alpha + 2.0);
    gs.fine_norms = {m, wq.h1c, wq.lcrit};
    gs.c_gn = 0.0;
    gs.pohozaev_residuals = {std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()};
    return gs;
}

// Best constant of the critical embedding, evaluated three independent ways
// from the explicit optimizer; the routes must agree or the quadrature is
// untrustworthy.
inline double sobolev_constants(const ModelParams& params) {
    const auto wq = detail::w_quadrature(params);
    const double d = params.d;
    const double r1 = std::pow(wq.h1c, -1.0 / d);
    const double r2 = std::pow(wq.lcrit, (d - 2) / (2.0 * d)) / std::sqrt(wq.h1c);
    const double e = 0.5 * wq.h1c - (d - 2) / (2.0 * d) * wq.lcrit;
    const double r3 = std::pow(d * e, -1.0 / d);
    const double spread = std::max({std::fabs(r1 - r2), std::fabs(r1 - r3),
                                    std::fabs(r2 - r3)}) / r1;
    if (spread > 1e-3)
        throw ConstructionFailed("independent routes to the embedding constant disagree");
    return r1;
}

}  // namespace nlsc
