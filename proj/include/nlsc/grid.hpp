#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "nlsc/errors.hpp"
#include "nlsc/params.hpp"

namespace nlsc {

using Complex = std::complex<double>;

inline double sphere_area(int d) {
    // surface measure of S^{d-1}
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

// Staggered radial grid on (0, r_max): nodes r_j = (j + 1/2) h, h = r_max / n,
// with midpoint quadrature weight w_j = |S^{d-1}| r_j^{d-1} h per node.
struct RadialGrid {
    int d = 0;
    double r_max = 0.0;
    int n = 0;
    double h = 0.0;
    double omega = 0.0;
    std::vector<double> r;
    std::vector<double> w;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr build_grid(int d, double r_max, int n) {
    if (d < 3)
        throw DimensionUnsupported("dimension d = " + std::to_string(d) + " (need d >= 3)");
    if (n < 8)
        throw GridTooCoarse("n = " + std::to_string(n) + " nodes (need n >= 8)");
    if (!(r_max > 0.0))
        throw RadiusOutOfRange("r_max = " + std::to_string(r_max) + " (need r_max > 0)");
    auto g = std::make_shared<RadialGrid>();
    g->d = d;
    g->r_max = r_max;
    g->n = n;
    g->h = r_max / n;
    g->omega = sphere_area(d);
    g->r.resize(n);
    g->w.resize(n);
    for (int j = 0; j < n; ++j) {
        g->r[j] = (j + 0.5) * g->h;
        g->w[j] = g->omega * std::pow(g->r[j], d - 1) * g->h;
    }
    return g;
}

// Radial field sampled at the grid nodes.  is_real marks fields whose
// imaginary parts are identically zero (profiles, weights).
struct Field {
    GridPtr grid;
    std::vector<Complex> v;
    bool is_real = false;
};

inline Field zero_field(GridPtr g) {
    Field f;
    f.v.assign(g->n, Complex{0.0, 0.0});
    f.grid = std::move(g);
    f.is_real = true;
    return f;
}

template <class Fn>
Field field_from(GridPtr g, Fn&& fn, bool is_real = true) {
    Field f;
    f.grid = g;
    f.is_real = is_real;
    f.v.resize(g->n);
    for (int j = 0; j < g->n; ++j) f.v[j] = fn(g->r[j]);
    return f;
}

// ---- quadrature --------------------------------------------------------

inline double lp_pow(const Field& f, double p) {
    // integral of |u|^p over R^d
    const auto& g = *f.grid;
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * std::pow(std::abs(f.v[j]), p);
    return s;
}

inline double mass(const Field& f) {
    const auto& g = *f.grid;
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * std::norm(f.v[j]);
    return s;
}

inline double lp_norm(const Field& f, double p) {
    if (p < 1.0)
        throw ExponentOutOfRange("Lp norm needs p >= 1, got p = " + std::to_string(p));
    return std::pow(lp_pow(f, p), 1.0 / p);
}

inline double weighted_moment(const Field& f, double k) {
    // integral of r^k |u|^2
    const auto& g = *f.grid;
    double s = 0.0;
    for (int j = 0; j < g.n; ++j) s += g.w[j] * std::pow(g.r[j], k) * std::norm(f.v[j]);
    return s;
}

inline Complex wdot(const Field& a, const Field& b) {
    const auto& g = *a.grid;
    Complex s{0.0, 0.0};
    for (int j = 0; j < g.n; ++j) s += g.w[j] * std::conj(a.v[j]) * b.v[j];
    return s;
}

// Plain (c = 0) gradient quadrature: face differences with a Dirichlet ghost
// node beyond r_max.
inline double grad_sq(const Field& f) {
    const auto& g = *f.grid;
    double s = 0.0;
    for (int k = 1; k <= g.n; ++k) {
        const Complex up = (k < g.n) ? f.v[k] : Complex{0.0, 0.0};
        const double fw = g.omega * std::pow(k * g.h, g.d - 1) * g.h;
        s += fw * std::norm((up - f.v[k - 1]) / g.h);
    }
    return s;
}

inline double hardy_residual(const Field& f) {
    // |grad u|^2 - lambda_d |u|^2 / r^2; nonnegative for admissible fields
    const double lam = 0.25 * (f.grid->d - 2) * (f.grid->d - 2);
    return grad_sq(f) - lam * weighted_moment(f, -2.0);
}

// ---- the operator P_c = -Laplacian + c / r^2 ---------------------------
//
// Discretized through the substitution v = r^rho u, which removes the
// inverse-square singularity: P_c u = r^-rho L_rho v with L_rho the
// divergence-form radial operator of weight r^{d-1-2 rho}.  Fluxes of v are
// differenced at the faces r = k h; the result is a tridiagonal operator
// that is self-adjoint in the grid inner product and positive semidefinite,
// and annihilates the exact zero mode r^-rho up to roundoff.
struct PcOperator {
    GridPtr grid;
    double rho = 0.0;
    std::vector<double> sub, dia, sup;
};

namespace detail {
// Indicial exponent of the coupling: the admissible local behavior of
// solutions near the origin is r^{-rho}.
inline double rho_of(int d, double c) {
    const double lam = 0.25 * (d - 2) * (d - 2);
    if (!(c > -lam))
        throw CouplingOutOfRange("coupling c = " + std::to_string(c) +
                                 " at or below -lambda(d) = " + std::to_string(-lam));
    return 0.5 * (d - 2) - std::sqrt(lam + c);
}
}  // namespace detail

inline PcOperator make_pc_operator(const GridPtr& grid, double rho) {
    const auto& g = *grid;
    const int n = g.n;
    const double q = g.d - 1 - 2.0 * rho;  // flux weight exponent, > 1

    PcOperator op;
    op.grid = grid;
    op.rho = rho;
    op.sub.assign(n, 0.0);
    op.dia.assign(n, 0.0);
    op.sup.assign(n, 0.0);

    std::vector<double> wf(n + 1);  // face weights (k h)^q, wf[0] = 0
    for (int k = 0; k <= n; ++k) wf[k] = std::pow(k * g.h, q);

    for (int j = 0; j < n; ++j) {
        const double denom = std::pow(g.r[j], q) * g.h * g.h;
        op.dia[j] = (wf[j + 1] + wf[j]) / denom;
        if (j > 0)
            op.sub[j] = -std::pow(g.r[j], -rho) * wf[j] * std::pow(g.r[j - 1], rho) / denom;
        if (j < n - 1)
            op.sup[j] = -std::pow(g.r[j], -rho) * wf[j + 1] * std::pow(g.r[j + 1], rho) / denom;
    }
    return op;
}

inline PcOperator make_pc_operator(const GridPtr& grid, const ModelParams& p) {
    if (grid->d != p.d)
        throw DimensionUnsupported("grid dimension " + std::to_string(grid->d) +
                                   " != model dimension " + std::to_string(p.d));
    return make_pc_operator(grid, p.rho);
}

inline Field apply_pc(const PcOperator& op, const Field& f) {
    const int n = f.grid->n;
    Field out;
    out.grid = f.grid;
    out.is_real = f.is_real;
    out.v.resize(n);
    for (int j = 0; j < n; ++j) {
        Complex s = op.dia[j] * f.v[j];
        if (j > 0) s += op.sub[j] * f.v[j - 1];
        if (j < n - 1) s += op.sup[j] * f.v[j + 1];
        out.v[j] = s;
    }
    return out;
}

inline Field apply_pc(const Field& f, double c) {
    return apply_pc(make_pc_operator(f.grid, detail::rho_of(f.grid->d, c)), f);
}

// Quadratic form of the discrete P_c: the H^1_c seminorm squared.  Computed
// in flux form so that it agrees with <apply_pc(u), u> to roundoff.
inline double h1c_seminorm_sq(const Field& f, double c) {
    const auto& g = *f.grid;
    const double rho = detail::rho_of(g.d, c);
    const double q = g.d - 1 - 2.0 * rho;
    double s = 0.0;
    Complex v_prev = std::pow(g.r[0], rho) * f.v[0];
    for (int k = 1; k <= g.n; ++k) {
        const Complex v_here =
            (k < g.n) ? Complex(std::pow(g.r[k], rho)) * f.v[k] : Complex{0.0, 0.0};
        const double fw = g.omega * std::pow(k * g.h, q) * g.h;
        s += fw * std::norm((v_here - v_prev) / g.h);
        v_prev = v_here;
    }
    return s;
}

inline double h1c_seminorm_sq(const Field& f, const ModelParams& p) {
    if (f.grid->d != p.d) throw DimensionUnsupported("grid/model dimension mismatch");
    return h1c_seminorm_sq(f, p.c);
}

inline double energy(const Field& f, const ModelParams& p) {
    return 0.5 * h1c_seminorm_sq(f, p) - lp_pow(f, p.alpha + 2.0) / (p.alpha + 2.0);
}

}  // namespace nlsc
