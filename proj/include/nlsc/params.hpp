#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "nlsc/errors.hpp"

namespace nlsc {

// Regime of the nonlinearity exponent relative to the scaling-critical values
// alpha_mass = 4/d and alpha_energy = 4/(d-2).
enum class Regime { MassSubcritical, MassCritical, Intercritical, EnergyCritical };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::MassSubcritical: return "mass-subcritical";
        case Regime::MassCritical: return "mass-critical";
        case Regime::Intercritical: return "intercritical";
        case Regime::EnergyCritical: return "energy-critical";
    }
    return "?";
}

// Model parameters for i u_t - P_c u = -|u|^alpha u with
// P_c = -Laplacian + c |x|^-2 on R^d, plus derived scaling quantities.
struct ModelParams {
    int d = 0;
    double alpha = 0.0;
    double c = 0.0;

    double lambda_d = 0.0;      // ((d-2)/2)^2, the Hardy constant
    double alpha_mass = 0.0;    // 4/d
    double alpha_energy = 0.0;  // 4/(d-2)
    double gamma_c = 0.0;       // d/2 - 2/alpha, critical Sobolev index
    double rho = 0.0;           // (d-2)/2 - sqrt(lambda_d + c)
    double beta = 0.0;          // sqrt(lambda_d + c) / sqrt(lambda_d)
    double c_bar = 0.0;         // min(c, 0)
    std::optional<double> sigma;  // (4-(d-2)alpha)/(d alpha-4), intercritical only
};

namespace detail {
constexpr double kRegimeTol = 1e-12;
}

inline Regime regime_of(const ModelParams& p) {
    const double am = p.alpha_mass;
    const double ae = p.alpha_energy;
    if (std::abs(p.alpha - am) <= detail::kRegimeTol * am) return Regime::MassCritical;
    if (std::abs(p.alpha - ae) <= detail::kRegimeTol * ae) return Regime::EnergyCritical;
    if (p.alpha < am) return Regime::MassSubcritical;
    return Regime::Intercritical;
}

inline ModelParams make_model_params(int d, double alpha, double c) {
    if (d < 3)
        throw DimensionUnsupported("dimension d = " + std::to_string(d) + " (need d >= 3)");
    const double dm2h = 0.5 * (d - 2);
    const double lam = dm2h * dm2h;
    if (!(c > -lam))
        throw CouplingOutOfRange("coupling c = " + std::to_string(c) +
                                 " (need c > -((d-2)/2)^2 = " + std::to_string(-lam) + ")");
    const double a_energy = 4.0 / (d - 2);
    if (!(alpha > 0.0) || alpha > a_energy * (1.0 + detail::kRegimeTol))
        throw ExponentOutOfRange("exponent alpha = " + std::to_string(alpha) +
                                 " (need 0 < alpha <= 4/(d-2))");

    ModelParams p;
    p.d = d;
    p.alpha = alpha;
    p.c = c;
    p.lambda_d = lam;
    p.alpha_mass = 4.0 / d;
    p.alpha_energy = a_energy;
    p.gamma_c = 0.5 * d - 2.0 / alpha;
    p.rho = dm2h - std::sqrt(lam + c);
    p.beta = std::sqrt(lam + c) / dm2h;
    p.c_bar = std::min(c, 0.0);
    if (regime_of(p) == Regime::Intercritical)
        p.sigma = (4.0 - (d - 2) * alpha) / (d * alpha - 4.0);
    return p;
}

// Same model with the coupling replaced by min(c, 0); ground-state quantities
// for c > 0 without the radial restriction live at this coupling.
inline ModelParams with_c_bar(const ModelParams& p) {
    return p.c == p.c_bar ? p : make_model_params(p.d, p.alpha, p.c_bar);
}

}  // namespace nlsc
