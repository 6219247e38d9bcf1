// fockforce: construct nonclassical oscillator states, run force-detection
// sensitivity analyses and parameter sweeps, draw Monte Carlo readout
// samples, and run the built-in verification suite.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fockforce/fockforce.hpp"

namespace ff = fockforce;
using ff::io::fmt_g9;
using ff::io::ordered_json;

namespace {

struct CommonArgs {
    std::string family = "coherent";
    double alpha = 0.0;
    double r = 0.0;
    double lambda = 0.0;
    int n_modes = 1;
    int K = 1;
    int nu = 0;
    double eps = 0.0;
    int dim = 0;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    std::uint64_t shots = 1000;
    std::string format = "csv";
    std::string out;
    std::string config;
    std::string parity = "even";
    std::string convention = "eqparameter";
    // option handles for provided-ness checks (config merge)
    std::map<std::string, CLI::Option*> opts;
};

void add_common_flags(CLI::App* cmd, CommonArgs& a) {
    a.opts["family"] = cmd->add_option("--family", a.family, "state family");
    a.opts["alpha"] = cmd->add_option("--alpha", a.alpha, "coherent amplitude");
    a.opts["r"] = cmd->add_option("--r", a.r, "squeezing parameter");
    a.opts["lambda"] = cmd->add_option("--lambda", a.lambda, "squeezing lambda = tanh r");
    a.opts["N"] = cmd->add_option("--N", a.n_modes, "mode count");
    a.opts["K"] = cmd->add_option("--K", a.K, "modulus for generalized cats");
    a.opts["nu"] = cmd->add_option("--nu", a.nu, "residue for generalized cats");
    a.opts["eps"] = cmd->add_option("--eps", a.eps, "force displacement parameter");
    a.opts["dim"] = cmd->add_option("--dim", a.dim, "Fock truncation dimension");
    a.opts["tol"] = cmd->add_option("--tol", a.tol, "reporting tolerance");
    a.opts["seed"] = cmd->add_option("--seed", a.seed, "RNG seed");
    a.opts["shots"] = cmd->add_option("--shots", a.shots, "Monte Carlo shot count");
    a.opts["format"] = cmd->add_option("--format", a.format, "csv or json");
    a.opts["out"] = cmd->add_option("--out", a.out, "output file path");
    a.opts["config"] = cmd->add_option("--config", a.config, "JSON config file");
    a.opts["parity"] = cmd->add_option("--parity", a.parity, "even or odd (cat family)");
    a.opts["convention"] =
        cmd->add_option("--convention", a.convention, "bound convention: eqparameter or cramerrao");
}

// JSON config supplies any flag; command-line flags take precedence.
void merge_config(CommonArgs& a) {
    if (a.config.empty()) return;
    std::ifstream in(a.config);
    if (!in) throw std::invalid_argument("cannot open config file: " + a.config);
    ordered_json j = ordered_json::parse(in);
    const auto take = [&](const char* key, auto& var) {
        using T = std::decay_t<decltype(var)>;
        if (a.opts.count(key) && a.opts[key]->count() == 0 && j.contains(key))
            var = j.at(key).get<T>();
    };
    take("family", a.family);
    take("alpha", a.alpha);
    take("r", a.r);
    take("lambda", a.lambda);
    take("N", a.n_modes);
    take("K", a.K);
    take("nu", a.nu);
    take("eps", a.eps);
    take("dim", a.dim);
    take("tol", a.tol);
    take("seed", a.seed);
    take("shots", a.shots);
    take("format", a.format);
    take("out", a.out);
    take("parity", a.parity);
    take("convention", a.convention);
}

bool given(const CommonArgs& a, const char* key) {
    const auto it = a.opts.find(key);
    return it != a.opts.end() && it->second->count() > 0;
}

ff::states::StateFamily parse_family(const CommonArgs& a) {
    using ff::states::FamilyTag;
    ff::states::StateFamily f;
    const std::string& name = a.family;
    if (name == "coherent") f.tag = FamilyTag::Coherent;
    else if (name == "squeezed") f.tag = FamilyTag::SqueezedVacuum;
    else if (name == "twomodesq") f.tag = FamilyTag::TwoModeSqueezed;
    else if (name == "circle") f.tag = FamilyTag::Circle;
    else if (name == "evencat") f.tag = FamilyTag::EvenCat;
    else if (name == "oddcat") f.tag = FamilyTag::OddCat;
    else if (name == "nmodecat") f.tag = FamilyTag::NModeCat;
    else if (name == "gencat") f.tag = FamilyTag::GeneralizedCat;
    else if (name == "cat") {
        if (a.n_modes > 1) f.tag = FamilyTag::NModeCat;
        else f.tag = (a.parity == "odd") ? FamilyTag::OddCat : FamilyTag::EvenCat;
    } else {
        throw std::invalid_argument("unknown family '" + name + "'");
    }
    f.alpha = a.alpha;
    if (given(a, "r")) f.r = a.r;
    if (given(a, "lambda")) f.lambda = a.lambda;
    f.n_modes = a.n_modes;
    f.K = a.K;
    f.nu = a.nu;
    ff::states::validate(f);
    return f;
}

ff::io::RunConfig run_config(const CommonArgs& a) {
    ff::io::RunConfig cfg;
    if (given(a, "dim") || a.dim > 0) {
        if (a.dim > 0) cfg.dim = a.dim;
    }
    cfg.tol = a.tol;
    cfg.seed = a.seed;
    cfg.format = (a.format == "json") ? ff::io::OutputFormat::Json : ff::io::OutputFormat::Csv;
    if (!a.out.empty()) cfg.out_path = a.out;
    return cfg;
}

ff::metrology::BoundConvention parse_convention(const CommonArgs& a) {
    if (a.convention == "cramerrao") return ff::metrology::BoundConvention::CramerRao;
    if (a.convention == "eqparameter") return ff::metrology::BoundConvention::PaperEqParameter;
    throw std::invalid_argument("unknown convention '" + a.convention + "'");
}

// FOCKFORCE_OUT_DIR overrides the output directory (and only that).
std::filesystem::path resolve_out_path(const std::string& out) {
    std::filesystem::path p(out);
    if (const char* dir = std::getenv("FOCKFORCE_OUT_DIR"); dir && *dir)
        return std::filesystem::path(dir) / p.filename();
    return p;
}

void emit(const ff::io::RunConfig& cfg, const std::string& text) {
    if (cfg.out_path) {
        const auto path = resolve_out_path(*cfg.out_path);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path.string());
        f << text;
    } else {
        std::cout << text;
    }
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ff::NoRoot*>(&e)) return 3;
    return 2;
}

// --- subcommands ---------------------------------------------------------------

int cmd_state(const CommonArgs& a) {
    const auto fam = parse_family(a);
    const auto cfg = run_config(a);
    const int dim = cfg.dim ? *cfg.dim : ff::states::default_dim(fam);
    ff::fock::MultiModeState s;
    try {
        s = ff::states::make_state(fam, dim, cfg.memory_cap);
    } catch (const ff::TruncationTooSmall& e) {
        const int hint = ff::fock::recommended_dim(std::abs(fam.alpha));
        std::cerr << "error: " << e.what() << "\nhint: try --dim " << std::max(hint, dim * 2) << "\n";
        return 2;
    }

    if (cfg.format == ff::io::OutputFormat::Json) {
        emit(cfg, ff::io::state_to_json(s, fam).dump(2) + "\n");
        return 0;
    }

    std::ostringstream os;
    os << "family: " << ff::states::family_name(fam.tag) << "\n";
    os << "modes: " << s.n_modes() << "  dim: " << dim << "\n";
    os << "norm: " << fmt_g9(ff::fock::norm(s)) << "\n";
    os << "mean_photon_total: " << fmt_g9(ff::metrology::total_mean_photon(s)) << " (analytic "
       << fmt_g9(ff::states::analytic_mean_photon(fam)) << ")\n";

    double tail = 0.0;
    {
        std::size_t f = 0;
        for (const auto& amp : s.amps) {
            std::size_t rem = f++;
            bool in_tail = false;
            for (int m = s.n_modes() - 1; m >= 0; --m) {
                const int dm = s.mode_dims[std::size_t(m)];
                if (int(rem % std::size_t(dm)) >= dm - 3) in_tail = true;
                rem /= std::size_t(dm);
            }
            if (in_tail) tail += std::norm(amp);
        }
    }
    os << "tail_mass: " << fmt_g9(tail) << "\n";

    std::vector<std::pair<double, std::size_t>> mags;
    for (std::size_t k = 0; k < s.amps.size(); ++k)
        if (std::abs(s.amps[k]) > 0) mags.push_back({std::abs(s.amps[k]), k});
    std::sort(mags.rbegin(), mags.rend());
    os << "leading amplitudes:\n";
    for (std::size_t k = 0; k < std::min<std::size_t>(5, mags.size()); ++k) {
        const auto amp = s.amps[mags[k].second];
        os << "  |" << mags[k].second << ">: " << fmt_g9(amp.real()) << " + " << fmt_g9(amp.imag())
           << "i\n";
    }

    if (fam.tag == ff::states::FamilyTag::GeneralizedCat) {
        // residue class carrying the support, found by amplitude scan
        std::vector<double> mass(std::size_t(fam.K), 0.0);
        for (std::size_t n = 0; n < s.amps.size(); ++n)
            mass[n % std::size_t(fam.K)] += std::norm(s.amps[n]);
        const std::size_t best = std::size_t(std::max_element(mass.begin(), mass.end()) - mass.begin());
        os << "support residue: n ≡ " << best << " (mod " << fam.K << ")\n";
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_sensitivity(const CommonArgs& a) {
    const auto fam = parse_family(a);
    const auto cfg = run_config(a);
    const auto rep = ff::sweep::sensitivity_report(fam, cfg, parse_convention(a));
    if (cfg.format == ff::io::OutputFormat::Json)
        emit(cfg, ff::io::report_to_json(rep).dump(2) + "\n");
    else
        emit(cfg, ff::io::report_csv_header() + ff::io::report_csv_row(rep));
    return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& axis, const std::string& values_str,
              double start, double stop, int count, bool have_range, int threads) {
    const auto cfg = run_config(a);
    ff::sweep::SweepSpec spec;
    spec.base = parse_family(a);
    spec.axis = axis;
    spec.convention = parse_convention(a);
    if (!values_str.empty()) {
        std::stringstream ss(values_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) spec.values.push_back(std::stod(tok));
    } else if (have_range) {
        spec.values = ff::sweep::linspace(start, stop, count);
    } else {
        throw std::invalid_argument("sweep: provide --values or --start/--stop/--count");
    }
    const auto rows = ff::sweep::run_sweep(spec, cfg, threads);
    bool any_ok = false;
    for (const auto& row : rows) any_ok = any_ok || row.ok;
    if (cfg.format == ff::io::OutputFormat::Json)
        emit(cfg, ff::sweep::sweep_json(spec, rows).dump(2) + "\n");
    else
        emit(cfg, ff::sweep::sweep_csv(spec, rows));
    return any_ok ? 0 : 4;
}

int cmd_sample(const CommonArgs& a, const std::string& scheme) {
    const auto cfg = run_config(a);
    if (scheme == "parity") {
        const double alpha = given(a, "alpha") ? a.alpha : 1.0;
        const double theta = a.eps * alpha;  // theta = eps * alpha
        const auto rec = ff::sampling::sample_parity_readout(theta, a.shots, cfg.seed);
        const auto est = ff::sampling::estimate_theta(rec);
        emit(cfg, ff::io::shot_record_csv(rec));
        std::cout << ff::io::estimator_to_json(est).dump() << "\n";
        return 0;
    }
    if (scheme == "homodyne") {
        const auto fam = parse_family(a);
        const int dim = cfg.dim ? *cfg.dim : ff::states::default_dim(fam);
        const auto state = ff::states::make_state(fam, dim, cfg.memory_cap);
        if (state.n_modes() != 1)
            throw std::invalid_argument("sample homodyne: single-mode families only");
        ff::fock::FockVector v{state.amps};
        if (a.eps != 0.0) {
            const auto d = ff::fock::displacement(ff::numerics::cplx(0.0, a.eps), dim);
            v.amps = d.apply(v.amps);
        }
        const auto rec = ff::sampling::sample_homodyne(v, a.shots, cfg.seed, {});
        const auto [mean, var] = ff::sampling::sample_moments(rec);
        emit(cfg, ff::io::shot_record_csv(rec));
        ordered_json j;
        j["mean"] = mean;
        j["variance"] = var;
        j["shots"] = a.shots;
        std::cout << j.dump() << "\n";
        return 0;
    }
    throw std::invalid_argument("unknown scheme '" + scheme + "' (parity or homodyne)");
}

int cmd_verify(const CommonArgs& a) {
    const auto cfg = run_config(a);
    const auto checks = ff::verify::run_all_checks(cfg);
    for (const auto& c : checks)
        std::cerr << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << "  " << c.description << "\n";
    const auto j = ff::verify::verify_json(cfg, checks);
    if (cfg.out_path) emit(cfg, j.dump(2) + "\n");
    else std::cout << j.dump(2) << "\n";
    return j.at("all_pass").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated Fock-space simulator for weak-force detection limits"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string scheme = "parity", axis = "alpha", values_str;
    double start = 0.0, stop = 1.0;
    int count = 10, threads = 1;

    CLI::App* c_state = app.add_subcommand("state", "construct a state and report its profile");
    CLI::App* c_sens = app.add_subcommand("sensitivity", "minimum detectable force for one family");
    CLI::App* c_sweep = app.add_subcommand("sweep", "sensitivity table over a parameter grid");
    CLI::App* c_sample = app.add_subcommand("sample", "Monte Carlo measurement readout");
    CLI::App* c_verify = app.add_subcommand("verify", "run the built-in verification suite");

    for (CLI::App* c : {c_state, c_sens, c_sweep, c_sample, c_verify}) add_common_flags(c, args);
    c_sample->add_option("--scheme", scheme, "parity or homodyne");
    c_sweep->add_option("--axis", axis, "alpha | r | lambda | N | K");
    c_sweep->add_option("--values", values_str, "comma-separated grid values");
    CLI::Option* o_start = c_sweep->add_option("--start", start, "grid start");
    c_sweep->add_option("--stop", stop, "grid stop");
    c_sweep->add_option("--count", count, "grid point count");
    c_sweep->add_option("--threads", threads, "parallel evaluation threads");

    CLI11_PARSE(app, argc, argv);

    try {
        merge_config(args);
        if (c_state->parsed()) return cmd_state(args);
        if (c_sens->parsed()) return cmd_sensitivity(args);
        if (c_sweep->parsed())
            return cmd_sweep(args, axis, values_str, start, stop, count, o_start->count() > 0,
                             threads);
        if (c_sample->parsed()) return cmd_sample(args, scheme);
        if (c_verify->parsed()) return cmd_verify(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 2;
}
