#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "nlsc/dynamics.hpp"
#include "nlsc/errors.hpp"
#include "nlsc/grid.hpp"
#include "nlsc/groundstate.hpp"
#include "nlsc/params.hpp"

namespace nlsc {

enum class Prediction { GlobalGuaranteed, BlowupGuaranteed, Indeterminate };

inline const char* prediction_name(Prediction p) {
    switch (p) {
        case Prediction::GlobalGuaranteed: return "global";
        case Prediction::BlowupGuaranteed: return "blowup";
        case Prediction::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

struct DataGeometry {
    bool has_xu_L2 = true;
    bool radial = false;
};

struct Verdict {
    Prediction prediction = Prediction::Indeterminate;
    std::string rule_fired;
    std::map<std::string, double> margins;
};

namespace detail {
constexpr double kEqTol = 1e-9;  // relative width of the undecidable threshold band

inline bool near_rel(double a, double b) {
    return std::fabs(a - b) <= kEqTol * std::max({std::fabs(a), std::fabs(b), 1e-300});
}

// The collapse theorems away from the attractive-coupling edge require the
// coupling to clear this (negative) floor when c != 0.
inline double collapse_coupling_floor(const ModelParams& p) {
    const double d = p.d;
    return -(d * d + 4.0 * d) / ((d + 2.0) * (d + 2.0)) * p.lambda_d;
}

inline bool collapse_coupling_ok(const ModelParams& p) {
    return p.c == 0.0 || p.c > collapse_coupling_floor(p);
}
}  // namespace detail

// Threshold polynomial controlling the intercritical trap argument.
inline double f_func(double x, const ModelParams& params, double c_gn) {
    if (regime_of(params) != Regime::Intercritical)
        throw RegimeMismatch("threshold polynomial needs a strictly intercritical exponent");
    return 0.5 * x * x -
           c_gn / (params.alpha + 2.0) * std::pow(x, 0.5 * params.d * params.alpha);
}

// Energy-critical analogue built from the embedding constant.
inline double g_func(double y, const ModelParams& params, double c_se) {
    if (regime_of(params) != Regime::EnergyCritical)
        throw RegimeMismatch("threshold polynomial needs the energy-critical exponent");
    const double p = params.alpha + 2.0;
    return 0.5 * y * y - std::pow(c_se, p) / p * std::pow(y, p);
}

// Pure decision procedure: measures the conserved quantities of u0 once and
// walks the inequality set of the matching regime.  Returns Indeterminate
// whenever no hypothesis verifiably holds, including exact-threshold inputs.
inline Verdict classify(const Field& u0, const ModelParams& params, const Thresholds& th,
                        const DataGeometry& geom) {
    if (th.regime != regime_of(params))
        throw RegimeMismatch("threshold bundle was built for a different regime");

    const double m = mass(u0);
    const double k = h1c_seminorm_sq(u0, params);
    const double e = energy(u0, params);
    const bool localized = geom.has_xu_L2 || geom.radial;

    Verdict v;
    v.margins["mass"] = m;
    v.margins["h1c_sq"] = k;
    v.margins["energy"] = e;

    switch (th.regime) {
        case Regime::MassSubcritical: {
            v.prediction = Prediction::GlobalGuaranteed;
            v.rule_fired = "subcritical-exponent";
            return v;
        }
        case Regime::MassCritical: {
            const double mq = th.require_q_mass();
            const double mu = std::sqrt(m);
            v.margins["mass_gap"] = mq - mu;
            if (detail::near_rel(mu, mq)) {
                v.rule_fired = "at-ground-state-mass";
                return v;
            }
            if (mu < mq) {
                v.prediction = Prediction::GlobalGuaranteed;
                v.rule_fired = "mass-below-ground-state";
                return v;
            }
            if (e < 0.0 && localized) {
                v.prediction = Prediction::BlowupGuaranteed;
                v.rule_fired = "negative-energy-collapse";
                return v;
            }
            v.rule_fired = "no-theorem-applies";
            return v;
        }
        case Regime::Intercritical: {
            const double h = th.require_h();
            const double kc = th.require_k();
            const double sig = *params.sigma;
            const double em = e * std::pow(m, sig);
            const double xu = std::sqrt(k) * std::pow(m, 0.5 * sig);
            v.margins["energy_threshold_gap"] = h - em;
            v.margins["kinetic_gap"] = kc - xu;
            if (e < 0.0 && localized) {
                v.prediction = Prediction::BlowupGuaranteed;
                v.rule_fired = "negative-energy-collapse";
                return v;
            }
            if (detail::near_rel(em, h)) {
                v.rule_fired = "at-energy-threshold";
                return v;
            }
            if (em > h) {
                v.rule_fired = "above-energy-threshold";
                return v;
            }
            if (detail::near_rel(xu, kc)) {
                v.rule_fired = "at-kinetic-threshold";
                return v;
            }
            if (xu < kc) {
                v.prediction = Prediction::GlobalGuaranteed;
                v.rule_fired = "below-kinetic-threshold";
                return v;
            }
            if (localized) {
                v.prediction = Prediction::BlowupGuaranteed;
                v.rule_fired = "above-kinetic-threshold";
                return v;
            }
            v.rule_fired = "above-kinetic-threshold-without-localization";
            return v;
        }
        case Regime::EnergyCritical: {
            const double we = th.require_w_energy();
            const double wn = th.require_w_h1c();  // optimizer seminorm (not squared)
            const double un = std::sqrt(k);
            v.margins["energy_gap"] = we - e;
            v.margins["seminorm_gap"] = wn - un;
            const bool coupling_ok =
                th.radial_branch ? true : detail::collapse_coupling_ok(params);
            if (e < 0.0 && localized && coupling_ok) {
                v.prediction = Prediction::BlowupGuaranteed;
                v.rule_fired = "negative-energy-collapse";
                return v;
            }
            if (e < we && detail::near_rel(un, wn))
                throw std::invalid_argument(
                    "inputs claim sub-optimizer energy at the optimizer seminorm; "
                    "these are incompatible");
            if (detail::near_rel(e, we)) {
                v.rule_fired = "at-optimizer-energy";
                return v;
            }
            if (e >= 0.0 && e < we && un > wn && localized && coupling_ok) {
                v.prediction = Prediction::BlowupGuaranteed;
                v.rule_fired = "above-optimizer-collapse";
                return v;
            }
            if (params.c == 0.0 && e < we && un < wn &&
                ((geom.radial && params.d <= 5) || params.d >= 4)) {
                v.prediction = Prediction::GlobalGuaranteed;
                v.rule_fired = "below-optimizer-global";
                return v;
            }
            v.rule_fired = "no-theorem-applies";
            return v;
        }
    }
    v.rule_fired = "no-theorem-applies";
    return v;
}

// ---------------------------------------------------------------------------
// Sweep harness: cross product of model parameters and data families, each
// cell classified and then simulated, with any verifiable contradiction fatal.

struct GaussianSpec {
    double amplitude = 1.0;
    double width = 1.0;
};

struct SweepConfig {
    std::vector<int> ds;
    std::vector<double> alphas;
    std::vector<double> cs;
    std::vector<double> lambdas;         // scalings of the bound state
    std::vector<GaussianSpec> gaussians; // independent data family
    double r_max = 30.0;
    int n = 2048;
    EvolveControls controls;
    int workers = 4;
};

struct SweepRow {
    ModelParams params{};
    std::string data_desc;
    Prediction prediction = Prediction::Indeterminate;
    std::string rule_fired;
    EvolveVerdict simulated = EvolveVerdict::Unresolved;
    bool agree = true;
    bool radial_branch = false;  // which threshold branch backed the verdict
    double mass = 0.0, energy = 0.0;
    double t_blowup_estimate = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::string config_digest;
    int d_grid = 0;       // grid provenance (shared across rows of a config)
    double r_max = 0.0;
    int n = 0;
};

namespace detail {

inline std::string sweep_digest(const SweepConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    for (int d : cfg.ds) os << 'd' << d;
    for (double a : cfg.alphas) os << 'a' << a;
    for (double c : cfg.cs) os << 'c' << c;
    for (double l : cfg.lambdas) os << 'l' << l;
    for (const auto& g : cfg.gaussians) os << 'g' << g.amplitude << 'w' << g.width;
    os << 'R' << cfg.r_max << 'n' << cfg.n << 't' << cfg.controls.t_end << 's'
       << cfg.controls.dt0;
    const std::string s = os.str();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream hx;
    hx << std::hex << h;
    return hx.str();
}

inline bool verdicts_agree(Prediction p, EvolveVerdict s) {
    if (p == Prediction::Indeterminate) return true;
    if (s == EvolveVerdict::Unresolved) return true;
    if (p == Prediction::GlobalGuaranteed) return s == EvolveVerdict::GlobalSoFar;
    return s == EvolveVerdict::BlowupDetected;
}

}  // namespace detail

inline SweepReport sweep(const SweepConfig& cfg) {
    SweepReport rep;
    rep.config_digest = detail::sweep_digest(cfg);
    rep.r_max = cfg.r_max;
    rep.n = cfg.n;
    if (!cfg.ds.empty()) rep.d_grid = cfg.ds.front();

    struct Cell {
        ModelParams params;
        GridPtr grid;
        Field u0;
        std::string desc;
        Thresholds th;
    };
    std::vector<Cell> cells;
    for (int d : cfg.ds) {
        const auto grid = build_grid(d, cfg.r_max, cfg.n);
        for (double alpha : cfg.alphas)
            for (double c : cfg.cs) {
                const auto params = make_model_params(d, alpha, c);
                const auto th =
                    (c > 0.0) ? thresholds_radial(params) : thresholds(params);
                if (!cfg.lambdas.empty()) {
                    const auto gs = shoot_ground_state(params, grid, c > 0.0);
                    for (double lam : cfg.lambdas) {
                        Cell cell{params, grid, gs.profile, "", th};
                        for (auto& z : cell.u0.v) z *= lam;
                        std::ostringstream os;
                        os << "lambda*Q lambda=" << lam;
                        cell.desc = os.str();
                        cells.push_back(std::move(cell));
                    }
                }
                for (const auto& gsp : cfg.gaussians) {
                    Cell cell{params, grid,
                              field_from(grid,
                                         [&](double r) {
                                             return gsp.amplitude *
                                                    std::exp(-r * r /
                                                             (2.0 * gsp.width * gsp.width));
                                         }),
                              "", th};
                    std::ostringstream os;
                    os << "gaussian A=" << gsp.amplitude << " w=" << gsp.width;
                    cell.desc = os.str();
                    cells.push_back(std::move(cell));
                }
            }
    }

    rep.rows.resize(cells.size());
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const DataGeometry geom{true, true};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                const auto& cell = cells[i];
                SweepRow row;
                row.params = cell.params;
                row.data_desc = cell.desc;
                row.radial_branch = cell.th.radial_branch;
                row.mass = mass(cell.u0);
                row.energy = energy(cell.u0, cell.params);
                const Verdict v = classify(cell.u0, cell.params, cell.th, geom);
                row.prediction = v.prediction;
                row.rule_fired = v.rule_fired;
                const Trajectory tr = evolve(cell.u0, cell.params, cfg.controls);
                row.simulated = tr.verdict;
                row.t_blowup_estimate = tr.t_blowup_estimate;
                row.agree = detail::verdicts_agree(row.prediction, row.simulated);
                rep.rows[i] = std::move(row);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    const int nw = std::max(1, std::min<int>(cfg.workers, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    for (const auto& row : rep.rows)
        if (!row.agree) {
            std::ostringstream os;
            os << "prediction " << prediction_name(row.prediction) << " vs simulation "
               << verdict_name(row.simulated) << " for " << row.data_desc << " at d="
               << row.params.d << " alpha=" << row.params.alpha << " c=" << row.params.c;
            throw SweepContradiction(os.str());
        }
    return rep;
}

}  // namespace nlsc
