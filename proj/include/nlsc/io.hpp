#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "nlsc/classify.hpp"
#include "nlsc/dynamics.hpp"
#include "nlsc/errors.hpp"
#include "nlsc/grid.hpp"
#include "nlsc/groundstate.hpp"
#include "nlsc/virial.hpp"

namespace nlsc {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

// Shortest exact decimal; the only float formatter used in emitted files.
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string digest_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

inline std::string field_csv(const Field& f) {
    std::string s = "r,re,im\n";
    for (int j = 0; j < f.grid->n; ++j)
        s += fmt_g17(f.grid->r[j]) + "," + fmt_g17(f.v[j].real()) + "," +
             fmt_g17(f.v[j].imag()) + "\n";
    return s;
}

inline std::string trajectory_csv(const Trajectory& traj) {
    std::string s = "t,mass,energy,h1c_sq,l_ap2,v_x2,v_phiR,dt\n";
    for (const auto& snap : traj.snaps)
        s += fmt_g17(snap.t) + "," + fmt_g17(snap.mass) + "," + fmt_g17(snap.energy) +
             "," + fmt_g17(snap.h1c_sq) + "," + fmt_g17(snap.l_ap2) + "," +
             fmt_g17(snap.v_x2) + "," + fmt_g17(snap.v_phi_r) + "," + fmt_g17(snap.dt) +
             "\n";
    return s;
}

inline std::string weight_csv(const LocalizedWeight& w) {
    std::string s = "r,phi,chi1,chi2\n";
    for (int j = 0; j < w.grid->n; ++j)
        s += fmt_g17(w.grid->r[j]) + "," + fmt_g17(w.phi[j]) + "," + fmt_g17(w.chi1[j]) +
             "," + fmt_g17(w.chi2[j]) + "\n";
    return s;
}

inline std::string sweep_csv(const SweepReport& rep) {
    std::string s = "d,alpha,c,data,prediction,rule,simulated,agree,radial_branch,"
                    "mass,energy,t_blowup_est\n";
    for (const auto& row : rep.rows)
        s += std::to_string(row.params.d) + "," + fmt_g17(row.params.alpha) + "," +
             fmt_g17(row.params.c) + "," + row.data_desc + "," +
             prediction_name(row.prediction) + "," + row.rule_fired + "," +
             verdict_name(row.simulated) + "," + (row.agree ? "1" : "0") + "," +
             (row.radial_branch ? "1" : "0") + "," + fmt_g17(row.mass) + "," +
             fmt_g17(row.energy) + "," + fmt_g17(row.t_blowup_estimate) + "\n";
    return s;
}

inline Json ground_summary_json(const GroundState& gs) {
    Json j;
    j["d"] = gs.params.d;
    j["alpha"] = gs.params.alpha;
    j["c"] = gs.params.c;
    j["c_used"] = gs.params_used.c;
    j["radial_branch"] = gs.radial_flag;
    j["amplitude"] = gs.amplitude;
    j["mass"] = gs.norms.mass;
    j["h1c_sq"] = gs.norms.h1c_sq;
    j["l_alpha_plus_2"] = gs.norms.l_alpha_plus_2;
    j["fine_mass"] = gs.fine_norms.mass;
    j["fine_h1c_sq"] = gs.fine_norms.h1c_sq;
    j["fine_l_alpha_plus_2"] = gs.fine_norms.l_alpha_plus_2;
    j["c_gn"] = gs.c_gn;
    j["pohozaev_residual_mass"] = gs.pohozaev_residuals.first;
    j["pohozaev_residual_potential"] = gs.pohozaev_residuals.second;
    return j;
}

inline Json trajectory_summary_json(const Trajectory& traj) {
    Json j;
    j["verdict"] = verdict_name(traj.verdict);
    j["snapshots"] = traj.snaps.size();
    j["t_final"] = traj.snaps.empty() ? 0.0 : traj.snaps.back().t;
    j["t_blowup_estimate"] = traj.t_blowup_estimate;
    j["mass_initial"] = traj.snaps.empty() ? 0.0 : traj.snaps.front().mass;
    j["mass_final"] = traj.snaps.empty() ? 0.0 : traj.snaps.back().mass;
    j["energy_initial"] = traj.snaps.empty() ? 0.0 : traj.snaps.front().energy;
    j["energy_final"] = traj.snaps.empty() ? 0.0 : traj.snaps.back().energy;
    j["h1c_sq_final"] = traj.snaps.empty() ? 0.0 : traj.snaps.back().h1c_sq;
    return j;
}

inline Json sweep_summary_json(const SweepReport& rep) {
    int global = 0, blowup = 0, indet = 0, contradictions = 0;
    for (const auto& row : rep.rows) {
        if (row.prediction == Prediction::GlobalGuaranteed) ++global;
        if (row.prediction == Prediction::BlowupGuaranteed) ++blowup;
        if (row.prediction == Prediction::Indeterminate) ++indet;
        if (!row.agree) ++contradictions;
    }
    Json j;
    j["config_digest"] = rep.config_digest;
    j["rows"] = rep.rows.size();
    j["counts"]["global_guaranteed"] = global;
    j["counts"]["blowup_guaranteed"] = blowup;
    j["counts"]["indeterminate"] = indet;
    j["contradictions"] = contradictions;
    return j;
}

// Every output directory gets one of these; enough to re-run the cell, and
// free of timestamps so reruns are byte-identical.
inline Json manifest_json(const Json& config_echo, int d, double r_max, int n) {
    Json j;
    j["inputs"]["config"] = config_echo;
    j["inputs"]["config_digest"] = digest_hex(config_echo.dump());
    j["versions"]["nlsc"] = kVersion;
    j["versions"]["format"] = kFormatVersion;
    j["grid"]["d"] = d;
    j["grid"]["r_max"] = r_max;
    j["grid"]["n"] = n;
    j["tolerances"]["shooting_residual"] = 1e-6;
    j["tolerances"]["regime_detect"] = 1e-12;
    j["tolerances"]["classify_equality"] = 1e-9;
    j["tolerances"]["hardy_floor"] = 1e-8;
    j["tolerances"]["weight_floor"] = 1e-12;
    return j;
}

}  // namespace nlsc
