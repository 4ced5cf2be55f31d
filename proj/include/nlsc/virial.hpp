#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "nlsc/errors.hpp"
#include "nlsc/grid.hpp"
#include "nlsc/params.hpp"

namespace nlsc {

// Radial cutoff slope built from three pieces: exactly 2s out to s = 1, the
// cubic 2[s - (s-1)^3] until its derivative vanishes at s = 1 + 1/sqrt(3),
// then a monotone Hermite ramp down to zero at s = 2.  theta is the exact
// antiderivative: s^2 near the origin, a constant plateau past s = 2.
struct CutoffProfile {
    static constexpr double kJoin = 1.5773502691896257645;  // 1 + 1/sqrt(3)
    double v1 = 0.0;          // slope value at the second join
    double theta_join = 0.0;  // theta at the second join
    double plateau = 0.0;     // theta for s >= 2

    double vartheta(double s) const {
        if (s <= 0.0) return 0.0;
        if (s <= 1.0) return 2.0 * s;
        if (s <= kJoin) {
            const double e = s - 1.0;
            return 2.0 * (s - e * e * e);
        }
        if (s < 2.0) {
            const double t = (s - kJoin) / (2.0 - kJoin);
            return v1 * (2 * t * t * t - 3 * t * t + 1);
        }
        return 0.0;
    }

    double dvartheta(double s) const {
        if (s <= 0.0) return 2.0;
        if (s <= 1.0) return 2.0;
        if (s <= kJoin) {
            const double e = s - 1.0;
            return 2.0 * (1.0 - 3.0 * e * e);
        }
        if (s < 2.0) {
            const double L = 2.0 - kJoin;
            const double t = (s - kJoin) / L;
            return v1 * (6 * t * t - 6 * t) / L;
        }
        return 0.0;
    }

    double theta(double s) const {
        if (s <= 0.0) return 0.0;
        if (s <= 1.0) return s * s;
        if (s <= kJoin) {
            const double e = s - 1.0;
            return s * s - 0.5 * e * e * e * e;
        }
        if (s < 2.0) {
            const double L = 2.0 - kJoin;
            const double t = (s - kJoin) / L;
            return theta_join + L * v1 * (0.5 * t * t * t * t - t * t * t + t);
        }
        return plateau;
    }
};

inline CutoffProfile build_theta() {
    CutoffProfile p;
    const double j = CutoffProfile::kJoin;
    const double e = j - 1.0;
    p.v1 = 2.0 * (j - e * e * e);
    p.theta_join = j * j - 0.5 * e * e * e * e;
    p.plateau = p.theta_join + (2.0 - j) * p.v1 * 0.5;
    // structural sanity: slope continuity at the joins, decay on the ramp,
    // curvature never above 2
    if (std::fabs(p.vartheta(1.0 - 1e-12) - p.vartheta(1.0 + 1e-12)) > 1e-9 ||
        std::fabs(p.vartheta(j - 1e-12) - p.vartheta(j + 1e-12)) > 1e-9 ||
        std::fabs(p.vartheta(2.0 - 1e-6)) > 1e-4)
        throw ConstructionFailed("cutoff slope is discontinuous");
    for (int i = 1; i < 256; ++i) {
        const double s = j + (2.0 - j) * i / 256.0;
        if (p.dvartheta(s) > 0.0)
            throw ConstructionFailed("cutoff slope must decay on the ramp");
    }
    for (int i = 0; i <= 1024; ++i)
        if (p.dvartheta(3.0 * i / 1024.0) > 2.0 + 1e-12)
            throw ConstructionFailed("cutoff curvature above 2");
    return p;
}

// phi_R(x) = R^2 theta(|x|/R) sampled on a grid, together with the two
// curvature weights of the localized flow identities: chi1 = 2 - phi_R'',
// chi2 = 2d - Delta phi_R.  Both vanish identically on r <= R and stay
// nonnegative everywhere.
struct LocalizedWeight {
    double R = 2.0;
    GridPtr grid;
    CutoffProfile prof;
    std::vector<double> phi, phi_prime, chi1, chi2;

    double chi1_at(double r) const { return 2.0 - prof.dvartheta(r / R); }
    double chi2_at(double r) const {
        const double s = r / R;
        if (s <= 0.0) return 0.0;
        return 2.0 * grid->d - prof.dvartheta(s) - (grid->d - 1) * prof.vartheta(s) / s;
    }
};

inline LocalizedWeight build_phi_r(const CutoffProfile& prof, double R,
                                   const GridPtr& grid) {
    if (!(R > 1.0)) throw RadiusOutOfRange("localization radius must exceed 1");
    LocalizedWeight w;
    w.R = R;
    w.grid = grid;
    w.prof = prof;
    const int n = grid->n;
    w.phi.resize(n);
    w.phi_prime.resize(n);
    w.chi1.resize(n);
    w.chi2.resize(n);
    for (int j = 0; j < n; ++j) {
        const double r = grid->r[j];
        const double s = r / R;
        w.phi[j] = R * R * prof.theta(s);
        w.phi_prime[j] = R * prof.vartheta(s);
        w.chi1[j] = w.chi1_at(r);
        w.chi2[j] = w.chi2_at(r);
        const double slope_ratio = 2.0 - w.phi_prime[j] / r;
        if (w.chi1[j] < -1e-12 || w.chi2[j] < -1e-12 || slope_ratio < -1e-12)
            throw ConstructionFailed("localized weight lost positivity at a node");
    }
    return w;
}

// Pointwise worst case of chi1 - (eps/(d+2)) chi2^{d/2} over the transition
// annulus R < r <= (1+1/sqrt(3)) R, where chi1 degenerates; evaluated at the
// grid nodes falling inside plus a dense uniform sample.  Both weights
// depend on r/R only, so the result is radius independent.
inline double positivity_margin(const LocalizedWeight& w, int d, double eps) {
    auto margin_at = [&](double s) {
        const double c1 = 2.0 - w.prof.dvartheta(s);
        const double c2 =
            2.0 * d - w.prof.dvartheta(s) - (d - 1) * w.prof.vartheta(s) / s;
        return c1 - eps / (d + 2) * std::pow(c2, 0.5 * d);
    };
    const double s_hi = CutoffProfile::kJoin;
    double worst = std::numeric_limits<double>::infinity();
    const int dense = 10000;
    for (int i = 1; i <= dense; ++i)
        worst = std::min(worst, margin_at(1.0 + (s_hi - 1.0) * i / dense));
    for (int j = 0; j < w.grid->n; ++j) {
        const double s = w.grid->r[j] / w.R;
        if (s > 1.0 && s <= s_hi) worst = std::min(worst, margin_at(s));
    }
    return worst;
}

// Node samples of a generic radial weight and its derivative, for moments
// V_chi = int chi |u|^2 and the exact flow derivative 2 int chi' Im(u* u_r).
struct VirialWeight {
    GridPtr grid;
    std::vector<double> chi, dchi;
};

inline VirialWeight make_xsq_weight(const GridPtr& grid) {
    VirialWeight w{grid, {}, {}};
    w.chi.resize(grid->n);
    w.dchi.resize(grid->n);
    for (int j = 0; j < grid->n; ++j) {
        w.chi[j] = grid->r[j] * grid->r[j];
        w.dchi[j] = 2.0 * grid->r[j];
    }
    return w;
}

inline VirialWeight as_virial_weight(const LocalizedWeight& lw) {
    return VirialWeight{lw.grid, lw.phi, lw.phi_prime};
}

namespace detail {

// Centered radial derivative at the nodes, with even reflection through the
// origin and a homogeneous ghost past the outer edge.
inline std::vector<Complex> node_centered_du(const Field& f) {
    const auto& g = *f.grid;
    std::vector<Complex> du(g.n);
    for (int j = 0; j < g.n; ++j) {
        const Complex um = (j > 0) ? f.v[j - 1] : f.v[0];
        const Complex up = (j + 1 < g.n) ? f.v[j + 1] : Complex(0.0);
        du[j] = (up - um) / (2.0 * g.h);
    }
    return du;
}

}  // namespace detail

inline double virial_potential(const Field& f, const VirialWeight& w) {
    const auto& g = *f.grid;
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j) acc += g.w[j] * w.chi[j] * std::norm(f.v[j]);
    return acc;
}

inline double virial_potential(const Field& f, const LocalizedWeight& w) {
    const auto& g = *f.grid;
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j) acc += g.w[j] * w.phi[j] * std::norm(f.v[j]);
    return acc;
}

inline double virial_first_derivative(const Field& f, const VirialWeight& w) {
    const auto& g = *f.grid;
    const auto du = detail::node_centered_du(f);
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j)
        acc += g.w[j] * w.dchi[j] * std::imag(std::conj(f.v[j]) * du[j]);
    return 2.0 * acc;
}

inline double virial_first_derivative(const Field& f, const LocalizedWeight& w) {
    return virial_first_derivative(f, VirialWeight{w.grid, w.phi, w.phi_prime});
}

// Exact second derivative of the unweighted second moment along the flow.
inline double global_virial_rhs(const Field& f, const ModelParams& p) {
    const double k = h1c_seminorm_sq(f, p);
    const double pot = lp_pow(f, p.alpha + 2.0);
    return 8.0 * k - 4.0 * p.d * p.alpha / (p.alpha + 2.0) * pot;
}

namespace detail {
// Leading constants of the localization error terms; calibrated against
// measured second differences in the test suite, generous by design.
constexpr double kLocVirialC = 32.0;
constexpr double kMassCritVirialC = 32.0;
}  // namespace detail

// Upper bound for the second derivative of V_{phi_R}: the exact global term
// plus localization error with an explicit mass-dependent constant.
inline double localized_virial_bound(const Field& f, const ModelParams& p,
                                     const LocalizedWeight& w) {
    const double R = w.R;
    const double m = mass(f);
    const double k = h1c_seminorm_sq(f, p);
    const double cu = detail::kLocVirialC * std::pow(1.0 + m, 0.25 * (p.alpha + 4.0));
    const double err = cu * (std::pow(R, -2.0) +
                             std::pow(R, -0.5 * (p.d - 1) * p.alpha) *
                                 std::pow(k, 0.25 * p.alpha));
    return global_virial_rhs(f, p) + err;
}

// Refined mass-critical bound: 16E minus the nonnegative annulus repair term,
// plus localization error that blows up as eps -> 0.
inline double masscrit_virial_bound(const Field& f, const ModelParams& p,
                                    const LocalizedWeight& w, double eps) {
    if (regime_of(p) != Regime::MassCritical)
        throw RegimeMismatch("refined bound needs the mass-critical exponent");
    if (!(eps > 0.0)) return std::numeric_limits<double>::infinity();
    const auto du = detail::node_centered_du(f);
    const auto& g = *f.grid;
    double repair = 0.0;
    for (int j = 0; j < g.n; ++j) {
        if (g.r[j] <= w.R) continue;
        const double mj = w.chi1[j] - eps / (p.d + 2) * std::pow(w.chi2[j], 0.5 * p.d);
        repair += g.w[j] * mj * std::norm(du[j]);
    }
    const double e = energy(f, p);
    const double cu = detail::kMassCritVirialC * (1.0 + mass(f));
    const double err = cu / (w.R * w.R) * (1.0 + eps + std::pow(eps, -2.0 / (p.d - 2)));
    return 16.0 * e - 4.0 * repair + err;
}

// sup of r^{(d-1)/2}|u| against the geometric mean of mass and gradient:
// bounded uniformly for radial fields.
inline double radial_sobolev_check(const Field& f) {
    const double m = mass(f);
    const double k = grad_sq(f);
    if (!(m > 0.0) || !(k > 0.0)) throw ZeroField("ratio undefined at the zero field");
    const auto& g = *f.grid;
    double sup = 0.0;
    for (int j = 0; j < g.n; ++j)
        sup = std::max(sup, std::pow(g.r[j], 0.5 * (g.d - 1)) * std::abs(f.v[j]));
    return sup / (std::pow(m, 0.25) * std::pow(k, 0.25));
}

}  // namespace nlsc
