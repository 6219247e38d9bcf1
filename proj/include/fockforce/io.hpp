#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fockforce/metrology.hpp"
#include "fockforce/sampling.hpp"
#include "fockforce/states.hpp"

namespace fockforce::io {

using ordered_json = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json };

/// Shared run options for the CLI commands.
struct RunConfig {
    std::optional<int> dim;       // defaults to the per-family truncation rule
    double tol = 1e-6;            // reporting tolerance
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::Csv;
    std::optional<std::string> out_path;
    std::size_t memory_cap = fock::kDefaultMemoryCap;
};

/// All numbers in text output go through this: 9 significant digits so
/// regression files diff cleanly. Tolerance comparisons happen in code,
/// never on the printed text.
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += '\n';  // LF endings
    return out;
}

// --- sensitivity reports ------------------------------------------------------

inline std::string report_csv_header() {
    return csv_row({"family", "alpha", "r", "lambda", "K", "nu", "N", "n_total", "S_per_eps", "V",
                    "snr_slope", "eps_min", "convention"});
}

inline std::vector<std::string> report_param_fields(const states::StateFamily& f) {
    using states::FamilyTag;
    std::vector<std::string> p(5);  // alpha, r, lambda, K, nu
    switch (f.tag) {
        case FamilyTag::Coherent:
        case FamilyTag::Circle:
        case FamilyTag::EvenCat:
        case FamilyTag::OddCat:
        case FamilyTag::NModeCat:
            p[0] = fmt_g9(f.alpha.real());
            break;
        case FamilyTag::GeneralizedCat:
            p[0] = fmt_g9(f.alpha.real());
            p[3] = std::to_string(f.K);
            p[4] = std::to_string(f.nu);
            break;
        case FamilyTag::SqueezedVacuum:
        case FamilyTag::TwoModeSqueezed:
            p[1] = fmt_g9(states::canonical_r(f));
            p[2] = fmt_g9(states::canonical_lambda(f));
            break;
    }
    return p;
}

inline std::string report_csv_row(const metrology::SensitivityReport& r) {
    const auto p = report_param_fields(r.family);
    const auto opt = [](double v) { return std::isnan(v) ? std::string() : fmt_g9(v); };
    return csv_row({states::family_name(r.family.tag), p[0], p[1], p[2], p[3], p[4],
                    std::to_string(r.mode_count), fmt_g9(r.mean_photon_total), opt(r.signal),
                    opt(r.variance), opt(r.snr_slope), fmt_g9(r.epsilon_min), r.convention});
}

inline ordered_json report_to_json(const metrology::SensitivityReport& r) {
    ordered_json j;
    j["family"] = states::family_name(r.family.tag);
    ordered_json params;
    const auto p = report_param_fields(r.family);
    if (!p[0].empty()) params["alpha"] = r.family.alpha.real();
    if (!p[1].empty()) params["r"] = states::canonical_r(r.family);
    if (!p[2].empty()) params["lambda"] = states::canonical_lambda(r.family);
    if (!p[3].empty()) params["K"] = r.family.K;
    if (!p[4].empty()) params["nu"] = r.family.nu;
    j["params"] = params;
    if (!std::isnan(r.signal)) j["signal"] = r.signal;
    j["variance"] = r.variance;
    if (!std::isnan(r.snr_slope)) j["snr_slope"] = r.snr_slope;
    j["epsilon_min"] = r.epsilon_min;
    j["mean_photon_total"] = r.mean_photon_total;
    j["mode_count"] = r.mode_count;
    j["linear"] = r.linear;
    j["convention"] = r.convention;
    return j;
}

// --- state serialization ------------------------------------------------------

inline ordered_json state_to_json(const fock::MultiModeState& s, const states::StateFamily& f) {
    ordered_json j;
    j["family"] = states::family_name(f.tag);
    ordered_json params;
    params["alpha_re"] = f.alpha.real();
    params["alpha_im"] = f.alpha.imag();
    if (f.r) params["r"] = *f.r;
    if (f.lambda) params["lambda"] = *f.lambda;
    params["n_modes"] = f.n_modes;
    params["K"] = f.K;
    params["nu"] = f.nu;
    j["params"] = params;
    j["dims"] = s.mode_dims;
    ordered_json amps = ordered_json::array();
    for (const auto& a : s.amps) amps.push_back({a.real(), a.imag()});
    j["amps"] = std::move(amps);
    return j;
}

inline fock::MultiModeState state_from_json(const ordered_json& j,
                                            std::size_t memory_cap = fock::kDefaultMemoryCap) {
    fock::MultiModeState s;
    s.mode_dims = j.at("dims").get<std::vector<int>>();
    const std::size_t total = fock::checked_total_dim(s.mode_dims, memory_cap);
    const auto& amps = j.at("amps");
    if (amps.size() != total) throw DimensionMismatch("state_from_json: amplitude count mismatch");
    s.amps.reserve(total);
    for (const auto& pair : amps)
        s.amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    fock::renormalize(s);
    return s;
}

// --- shot records -------------------------------------------------------------

inline std::string shot_record_csv(const sampling::ShotRecord& rec) {
    const char* scheme = rec.scheme == sampling::Scheme::ParityReadout ? "parity" : "homodyne";
    std::string out = csv_row({"scheme", "seed", "shots", "theta", "shot", "outcome"});
    for (std::size_t k = 0; k < rec.outcomes.size(); ++k)
        out += csv_row({scheme, std::to_string(rec.seed), std::to_string(rec.shots),
                        fmt_g9(rec.theta), std::to_string(k), fmt_g9(rec.outcomes[k])});
    return out;
}

inline ordered_json estimator_to_json(const sampling::EstimatorResult& res) {
    ordered_json j;
    j["theta_hat"] = res.theta_hat;
    j["std_error"] = res.std_error;
    j["shots"] = res.shots;
    j["boundary"] = res.boundary;
    return j;
}

}  // namespace fockforce::io
