#pragma once

#include <cmath>
#include <vector>

#include "nlsc/errors.hpp"
#include "nlsc/grid.hpp"
#include "nlsc/groundstate.hpp"
#include "nlsc/params.hpp"
#include "nlsc/virial.hpp"

namespace nlsc {

// Bound state spinning at unit frequency; exact orbit of the flow.
inline Field standing_wave(const GroundState& gs, double t) {
    Field out = gs.profile;
    const Complex ph = std::polar(1.0, t);
    for (auto& z : out.v) z *= ph;
    out.is_real = false;
    return out;
}

// Self-similar orbit through the bound state: amplitude |t-T|^{-d/2},
// quadratic chirp, profile evaluated on the shrinking scale.  Exists only at
// the mass-critical exponent and collapses as t -> T.
inline Field pseudo_conformal(const GroundState& gs, double T, double t) {
    if (regime_of(gs.params_used) != Regime::MassCritical)
        throw RegimeMismatch("self-similar orbit needs the mass-critical exponent");
    if (gs.fine.r.empty())
        throw ConstructionFailed("dense profile required for rescaled sampling");
    const double s = t - T;
    if (std::fabs(s) < 1e-300) throw SingularTime("requested instant is the focusing time");
    const double d = gs.params_used.d;
    const double amp = std::pow(std::fabs(s), -0.5 * d);
    return field_from(
        gs.profile.grid,
        [&](double r) {
            const double phase = r * r / (4.0 * s) - 1.0 / s;
            return Complex(amp * gs.fine.value(r / std::fabs(s))) * std::polar(1.0, phase);
        },
        false);
}

// Smooth compactly supported profile exp(-1/(1-(r/r0)^2)) on r < r0.
inline Field default_bump(const GridPtr& grid, double r0 = 2.0) {
    if (!(r0 > 0.0) || !(r0 < grid->r_max))
        throw RadiusOutOfRange("bump radius must sit inside the domain");
    return field_from(grid, [r0](double r) {
        const double s = r / r0;
        return (s < 1.0) ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
    });
}

struct BlowupDatum {
    Field field;
    double target_energy = 0.0;
    double measured_energy = 0.0;
    double lambda_ = 0.0;
    double mu = 0.0;
    double eps = 0.0;
    struct {
        double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
    } abcd;               // quadratures of the chirped seed
    double margin = 0.0;  // collapse-condition surplus of the delivered datum
};

// Mass-critical datum with prescribed positive energy that still satisfies
// the sufficient collapse condition.  Seed psi = e^{-i r^2} theta(r), datum
// lambda psi(mu r); the two scales solve the energy and condition equations
// in closed form, then lambda is polished so the grid-measured energy hits
// the target while the condition equation stays exactly satisfied.
inline BlowupDatum positive_energy_blowup_data(const ModelParams& params,
                                               double target_E, const Field& bump) {
    if (regime_of(params) != Regime::MassCritical)
        throw RegimeMismatch("construction needs the mass-critical exponent");
    if (!(target_E > 0.0)) throw ConstructionFailed("target energy must be positive");
    const auto& g = *bump.grid;
    if (g.d != params.d) throw InvalidBump("bump sampled in the wrong dimension");

    double peak = 0.0;
    for (const auto& z : bump.v) {
        if (z.imag() != 0.0) throw InvalidBump("bump must be real-valued");
        peak = std::max(peak, std::fabs(z.real()));
    }
    if (!(peak > 0.0)) throw InvalidBump("bump must not vanish identically");
    double support = 0.0;
    for (int j = 0; j < g.n; ++j)
        if (std::fabs(bump.v[j].real()) > 1e-13 * peak) support = g.r[j];
    if (!(support < 0.99 * g.r_max))
        throw InvalidBump("bump support must sit strictly inside the domain");

    std::vector<double> theta(g.n);
    for (int j = 0; j < g.n; ++j) theta[j] = bump.v[j].real();

    // seed quadratures on the bump's own grid
    Field psi = bump;
    psi.is_real = false;
    for (int j = 0; j < g.n; ++j)
        psi.v[j] = Complex(theta[j]) * std::polar(1.0, -g.r[j] * g.r[j]);
    const double ap2 = params.alpha + 2.0;
    const double A = 0.5 * h1c_seminorm_sq(psi, params);
    const double B = lp_pow(psi, ap2) / ap2;
    const double C = weighted_moment(bump, 2.0);
    const double D = 2.0 * C;
    if (!(C > 0.0) || !std::isfinite(A) || !(B > 0.0))
        throw InvalidBump("bump carries no usable mass");

    const double eps = 0.5 * std::min(A, D * D / (2.0 * C));
    const double as = params.alpha;  // mass-critical exponent 4/d
    auto mu_of = [&](double lam) { return std::sqrt(std::pow(lam, as) * B / (A - eps)); };
    double lam = std::pow(
        target_E / eps * std::pow(B / (A - eps), 0.5 * (params.d - 2)), 0.25 * params.d);
    if (!std::isfinite(lam) || !(lam > 0.0))
        throw ConstructionFailed("no usable scale for the requested energy");

    auto make_field = [&](double l) {
        const double m = mu_of(l);
        return field_from(
            bump.grid,
            [&](double r) {
                const double rr = m * r;
                const double th = detail::eval_even_cubic(g, theta, rr);
                return Complex(l * th) * std::polar(1.0, -rr * rr);
            },
            false);
    };
    auto e_of = [&](double l) { return energy(make_field(l), params); };

    // secant polish of lambda against the grid-measured energy
    double l0 = lam, f0 = e_of(l0) - target_E;
    double l1 = lam * 1.0001, f1 = e_of(l1) - target_E;
    const double etol = 1e-9 * std::max(1.0, std::fabs(target_E));
    for (int it = 0; it < 80 && std::fabs(f1) > etol; ++it) {
        if (f1 == f0) break;
        const double l2 = l1 - f1 * (l1 - l0) / (f1 - f0);
        l0 = l1; f0 = f1;
        l1 = (std::isfinite(l2) && l2 > 0.0) ? l2 : 0.5 * l1;
        f1 = e_of(l1) - target_E;
    }
    if (!(std::fabs(f1) <= 1e-7 * std::max(1.0, std::fabs(target_E))))
        throw ConstructionFailed("energy calibration did not settle");
    if (!(support / mu_of(l1) < 0.99 * g.r_max))
        throw ConstructionFailed("rescaled datum does not fit the domain");

    BlowupDatum out;
    out.field = make_field(l1);
    out.target_energy = target_E;
    out.measured_energy = f1 + target_E;
    out.lambda_ = l1;
    out.mu = mu_of(l1);
    out.eps = eps;
    out.abcd.A = A;
    out.abcd.B = B;
    out.abcd.C = C;
    out.abcd.D = D;

    // collapse condition measured on the delivered datum:
    // (Im int conj(u) r du)^2 / int r^2|u|^2 must exceed twice the energy
    const auto du = detail::node_centered_du(out.field);
    double dm = 0.0, cm = 0.0;
    for (int j = 0; j < g.n; ++j) {
        dm -= g.w[j] * g.r[j] * std::imag(std::conj(out.field.v[j]) * du[j]);
        cm += g.w[j] * g.r[j] * g.r[j] * std::norm(out.field.v[j]);
    }
    out.margin = dm * dm / cm - 2.0 * out.measured_energy;
    if (!(dm > 0.0) || !(out.margin > 0.0))
        throw ConstructionFailed("delivered datum misses the collapse condition");
    return out;
}

}  // namespace nlsc
