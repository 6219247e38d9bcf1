#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "fockforce/io.hpp"
#include "fockforce/metrology.hpp"
#include "fockforce/states.hpp"

namespace fockforce::sweep {

using metrology::BoundConvention;
using states::StateFamily;

struct SweepSpec {
    StateFamily base;
    std::string axis;            // alpha | r | lambda | N | K
    std::vector<double> values;  // strictly increasing
    BoundConvention convention = BoundConvention::PaperEqParameter;
};

inline std::vector<double> linspace(double start, double stop, int count) {
    if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
    std::vector<double> v(std::size_t(count));
    if (count == 1) {
        v[0] = start;
        return v;
    }
    const double step = (stop - start) / double(count - 1);
    for (int i = 0; i < count; ++i) v[std::size_t(i)] = start + double(i) * step;
    return v;
}

inline void validate(const SweepSpec& spec) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: values must be non-empty");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (!(spec.values[i] > spec.values[i - 1]))
            throw std::invalid_argument("sweep: values must be strictly increasing");
    if (spec.axis != "alpha" && spec.axis != "r" && spec.axis != "lambda" && spec.axis != "N" &&
        spec.axis != "K")
        throw std::invalid_argument("sweep: unknown axis '" + spec.axis + "'");
}

inline StateFamily at_value(const StateFamily& base, const std::string& axis, double v) {
    StateFamily f = base;
    if (axis == "alpha") f.alpha = v;
    else if (axis == "r") { f.r = v; f.lambda.reset(); }
    else if (axis == "lambda") { f.lambda = v; f.r.reset(); }
    else if (axis == "N") f.n_modes = int(std::lround(v));
    else if (axis == "K") f.K = int(std::lround(v));
    return f;
}

/// One sensitivity row for any family: quadrature families go through the
/// SNR = 1 analysis, cat families through the generator-variance bound.
inline metrology::SensitivityReport sensitivity_report(const StateFamily& f, const io::RunConfig& cfg,
                                                       BoundConvention convention) {
    using states::FamilyTag;
    const int dim = cfg.dim ? *cfg.dim : states::default_dim(f);
    switch (f.tag) {
        case FamilyTag::Coherent:
        case FamilyTag::SqueezedVacuum:
        case FamilyTag::TwoModeSqueezed:
        case FamilyTag::Circle:
            return metrology::min_detectable_force(f, dim, cfg.memory_cap);
        case FamilyTag::EvenCat:
        case FamilyTag::NModeCat:
            return metrology::cat_sensitivity_report(f.alpha.real(), f.n_modes, dim, convention,
                                                     cfg.memory_cap);
        default:
            throw std::invalid_argument("sensitivity: family '" +
                                        std::string(states::family_name(f.tag)) +
                                        "' has no sensitivity analysis");
    }
}

struct SweepRow {
    double value = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    metrology::SensitivityReport report;
    std::string error;
};

/// Evaluates the grid, optionally across threads. Rows are assembled in
/// index order so parallel and sequential runs emit identical bytes.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const io::RunConfig& cfg,
                                       int n_threads = 1) {
    validate(spec);
    std::vector<SweepRow> rows(spec.values.size());
    const auto eval_one = [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.value = spec.values[i];
        row.seed = cfg.seed ^ std::uint64_t(i);  // per-point derived seed
        try {
            row.report = sensitivity_report(at_value(spec.base, spec.axis, spec.values[i]), cfg,
                                            spec.convention);
            row.ok = true;
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    };
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) eval_one(i);
    } else {
        std::vector<std::thread> pool;
        std::size_t next = 0;
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = std::size_t(t); i < rows.size(); i += std::size_t(n_threads))
                    eval_one(i);
            });
        for (auto& th : pool) th.join();
        (void)next;
    }
    return rows;
}

inline std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    std::string out = io::csv_row({"axis", "value", "family", "alpha", "r", "lambda", "K", "nu", "N",
                                   "n_total", "S_per_eps", "V", "snr_slope", "eps_min", "convention",
                                   "error"});
    for (const auto& row : rows) {
        if (row.ok) {
            const auto p = io::report_param_fields(row.report.family);
            const auto opt = [](double v) { return std::isnan(v) ? std::string() : io::fmt_g9(v); };
            out += io::csv_row({spec.axis, io::fmt_g9(row.value),
                                states::family_name(row.report.family.tag), p[0], p[1], p[2], p[3],
                                p[4], std::to_string(row.report.mode_count),
                                io::fmt_g9(row.report.mean_photon_total), opt(row.report.signal),
                                opt(row.report.variance), opt(row.report.snr_slope),
                                io::fmt_g9(row.report.epsilon_min), row.report.convention, ""});
        } else {
            out += io::csv_row({spec.axis, io::fmt_g9(row.value),
                                states::family_name(spec.base.tag), "", "", "", "", "", "", "", "",
                                "", "", "", "", row.error});
        }
    }
    return out;
}

inline io::ordered_json sweep_json(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    io::ordered_json j;
    j["axis"] = spec.axis;
    io::ordered_json out = io::ordered_json::array();
    for (const auto& row : rows) {
        io::ordered_json r;
        r["value"] = row.value;
        if (row.ok) r["report"] = io::report_to_json(row.report);
        else r["error"] = row.error;
        out.push_back(std::move(r));
    }
    j["rows"] = std::move(out);
    return j;
}

}  // namespace fockforce::sweep
