#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fockforce/errors.hpp"
#include "fockforce/fock.hpp"
#include "fockforce/states.hpp"

namespace fockforce::metrology {

using fock::ModeOperator;
using fock::MultiModeState;
using numerics::cplx;
using states::StateFamily;

/// The weak force as an abstract displacement: D(beta) on every mode,
/// beta = i * epsilon when only the momentum-quadrature kick is given.
struct ForceParams {
    double epsilon = 0.0;
    std::optional<cplx> beta;
    bool per_mode = true;

    cplx effective_beta() const { return beta ? *beta : cplx(0.0, epsilon); }
};

enum class BoundConvention {
    PaperEqParameter,  // delta_theta = 1 / sqrt(Var)
    CramerRao,         // delta_theta = 1 / (2 sqrt(Var))
};

inline const char* convention_name(BoundConvention c) {
    return c == BoundConvention::PaperEqParameter ? "eqparameter" : "cramerrao";
}

struct EstimationBound {
    double generator_variance = 0.0;
    double delta_theta = 0.0;
    double convention_factor = 1.0;  // 1 or 1/2
    double theta_per_epsilon = 0.0;  // alpha (or N alpha) depending on context
    BoundConvention convention = BoundConvention::PaperEqParameter;
};

struct SensitivityReport {
    StateFamily family;
    double signal = 0.0;      // dS/d(epsilon); S(eps) = signal * eps
    double variance = 0.0;    // readout variance, epsilon-independent when linear
    double snr_slope = 0.0;   // SNR(eps) = snr_slope * eps
    double epsilon_min = 0.0;
    double mean_photon_total = 0.0;
    int mode_count = 1;
    bool linear = true;
    std::string convention;   // "snr1" for quadrature readout, bound tag otherwise
};

/// Displace every mode by D(beta); norm is preserved to truncation error.
inline MultiModeState apply_weak_force(const MultiModeState& s, const ForceParams& f,
                                       const numerics::NumericsConfig& cfg = {}) {
    const cplx beta = f.effective_beta();
    if (beta == cplx(0.0, 0.0)) return s;
    MultiModeState out = s;
    int last_dim = -1;
    ModeOperator d;
    for (int m = 0; m < s.n_modes(); ++m) {
        const int dim = s.mode_dims[std::size_t(m)];
        if (dim != last_dim) {
            d = fock::displacement(beta, dim, cfg);
            last_dim = dim;
        }
        out = fock::apply_single_mode(out, d, m);
    }
    return out;
}

/// Mean and variance of the collective quadrature sum_i Y_i.
inline std::pair<double, double> quadrature_stats(const MultiModeState& s) {
    MultiModeState phi{s.mode_dims, std::vector<cplx>(s.total_dim())};
    int last_dim = -1;
    ModeOperator y;
    for (int m = 0; m < s.n_modes(); ++m) {
        const int dim = s.mode_dims[std::size_t(m)];
        if (dim != last_dim) {
            y = fock::quadrature_y(dim);
            last_dim = dim;
        }
        MultiModeState t = fock::apply_single_mode(s, y, m);
        for (std::size_t k = 0; k < phi.amps.size(); ++k) phi.amps[k] += t.amps[k];
    }
    const double mean = fock::inner_product(s, phi).real();
    double second = 0.0;
    for (const auto& a : phi.amps) second += std::norm(a);
    return {mean, second - mean * mean};
}

inline double total_mean_photon(const MultiModeState& s) {
    double total = 0.0;
    int last_dim = -1;
    ModeOperator n;
    for (int m = 0; m < s.n_modes(); ++m) {
        const int dim = s.mode_dims[std::size_t(m)];
        if (dim != last_dim) {
            n = fock::number_operator(dim);
            last_dim = dim;
        }
        total += fock::expectation(s, n, m).real();
    }
    return total;
}

/// Minimum detectable force for the quadrature-readout families. The
/// signal is checked linear in epsilon and the variance epsilon-free; the
/// SNR = 1 crossing is then sqrt(V)/(2M) with M displaced modes. A
/// bisection fallback covers a nonlinear signal.
inline SensitivityReport min_detectable_force(const StateFamily& family, int dim,
                                              std::size_t memory_cap = fock::kDefaultMemoryCap) {
    using states::FamilyTag;
    if (family.tag != FamilyTag::Coherent && family.tag != FamilyTag::SqueezedVacuum &&
        family.tag != FamilyTag::TwoModeSqueezed && family.tag != FamilyTag::Circle)
        throw std::invalid_argument("min_detectable_force: family has no quadrature readout");

    const MultiModeState s0 = states::make_state(family, dim, memory_cap);
    const int modes = s0.n_modes();

    const auto stats_at = [&](double eps) {
        if (eps == 0.0) return quadrature_stats(s0);
        return quadrature_stats(apply_weak_force(s0, ForceParams{eps, std::nullopt, true}));
    };

    const auto [s_zero, v_zero] = stats_at(0.0);
    const auto [s_one, v_one] = stats_at(0.1);
    const auto [s_two, v_two] = stats_at(0.2);

    const double slope1 = (s_one - s_zero) / 0.1;
    const double slope2 = (s_two - s_zero) / 0.2;
    const bool linear = std::abs(slope2 - slope1) <= 1e-6 * std::max(1.0, std::abs(slope1)) &&
                        std::abs(v_one - v_zero) <= 1e-8 * std::max(1.0, v_zero);

    SensitivityReport rep;
    rep.family = family;
    rep.signal = slope1;
    rep.variance = v_zero;
    rep.snr_slope = slope1 / std::sqrt(v_zero);
    rep.mode_count = modes;
    rep.mean_photon_total = total_mean_photon(s0);
    rep.linear = linear;
    rep.convention = "snr1";

    if (linear) {
        if (rep.snr_slope * 10.0 < 1.0) throw NoRoot("min_detectable_force: SNR(10) < 1");
        rep.epsilon_min = std::sqrt(v_zero) / (2.0 * modes);
        return rep;
    }

    // NonlinearSignal: flagged, not fatal; fall back to root finding.
    const auto snr = [&](double eps) {
        const auto [sv, vv] = stats_at(eps);
        return (sv - s_zero) / std::sqrt(vv);
    };
    if (snr(10.0) < 1.0) throw NoRoot("min_detectable_force: SNR(10) < 1");
    double lo = 1e-6, hi = 10.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (snr(mid) < 1.0 ? lo : hi) = mid;
    }
    rep.epsilon_min = 0.5 * (lo + hi);
    return rep;
}

/// Closed-form circle-state minimum: (1/2) sqrt(1/2 + nbar - alpha) with
/// nbar = alpha I1(2 alpha)/I0(2 alpha). Serves as the oracle for the
/// numeric SNR = 1 crossing.
inline double circle_epsilon_min_analytic(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("circle_epsilon_min_analytic: alpha must be >= 0");
    const double nbar = states::circle_nbar(alpha);
    return 0.5 * std::sqrt(0.5 + nbar - alpha);
}

/// delta_theta from the generator variance, under either convention. Both
/// are first-class because published constants mix the two; reports carry
/// the tag.
inline EstimationBound estimation_bound(double generator_variance, BoundConvention convention) {
    if (generator_variance <= 1e-14)
        throw DegenerateGenerator("estimation_bound: generator variance is numerically zero");
    EstimationBound b;
    b.generator_variance = generator_variance;
    b.convention = convention;
    b.convention_factor = (convention == BoundConvention::CramerRao) ? 0.5 : 1.0;
    b.delta_theta = b.convention_factor / std::sqrt(generator_variance);
    return b;
}

/// sigma_x on the span of the exactly-normalized parity cats |+>, |->.
inline ModeOperator parity_flip_operator(double alpha, int dim) {
    const fock::FockVector plus = states::cat(alpha, states::Parity::Even, dim);
    const fock::FockVector minus = states::cat(alpha, states::Parity::Odd, dim);
    ModeOperator sx(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            sx(i, j) = plus.amps[std::size_t(i)] * std::conj(minus.amps[std::size_t(j)]) +
                       minus.amps[std::size_t(i)] * std::conj(plus.amps[std::size_t(j)]);
    return sx;
}

/// Var(sum_i sigma_x^(i)) on the N-mode entangled cat; approaches N^2 for
/// alpha >> 1, with the finite-alpha corrections measured rather than
/// assumed away.
inline double cat_generator_variance(double alpha, int n_modes, int dim,
                                     std::size_t memory_cap = fock::kDefaultMemoryCap) {
    const MultiModeState psi = states::n_mode_cat(alpha, n_modes, dim, memory_cap);
    const ModeOperator sx = parity_flip_operator(alpha, dim);
    MultiModeState phi{psi.mode_dims, std::vector<cplx>(psi.total_dim())};
    for (int m = 0; m < n_modes; ++m) {
        MultiModeState t = fock::apply_single_mode(psi, sx, m);
        for (std::size_t k = 0; k < phi.amps.size(); ++k) phi.amps[k] += t.amps[k];
    }
    const double mean = fock::inner_product(psi, phi).real();
    double second = 0.0;
    for (const auto& a : phi.amps) second += std::norm(a);
    return second - mean * mean;
}

/// Parameter-estimation sensitivity report for the cat families: the
/// readout bound delta_eps = delta_theta / alpha with theta = eps * alpha.
inline SensitivityReport cat_sensitivity_report(double alpha, int n_modes, int dim,
                                                BoundConvention convention,
                                                std::size_t memory_cap = fock::kDefaultMemoryCap) {
    if (alpha <= 0.0) throw std::invalid_argument("cat_sensitivity_report: alpha must be > 0");
    const double var = cat_generator_variance(alpha, n_modes, dim, memory_cap);
    const EstimationBound b = estimation_bound(var, convention);
    SensitivityReport rep;
    rep.family.tag = (n_modes == 1) ? states::FamilyTag::EvenCat : states::FamilyTag::NModeCat;
    rep.family.alpha = alpha;
    rep.family.n_modes = n_modes;
    rep.signal = std::numeric_limits<double>::quiet_NaN();
    rep.variance = var;
    rep.snr_slope = std::numeric_limits<double>::quiet_NaN();
    rep.epsilon_min = b.delta_theta / alpha;
    rep.mode_count = n_modes;
    rep.mean_photon_total = states::n_mode_cat_ntot(alpha, n_modes);
    rep.convention = convention_name(convention);
    return rep;
}

/// Dual-quadrature readout of the K = 4 generalized cat: displace |4,0> by
/// D(beta) and pull theta = alpha Im(beta), phi = alpha Re(beta) from the
/// overlap phases with the four coherent components. Each overlap phase is
/// 2 theta (displacement phase plus coherent-overlap phase contribute
/// equally), hence the factor 1/4 on the difference.
inline std::pair<double, double> generalized_cat_readout(double alpha, cplx beta, int dim) {
    if (std::exp(-2.0 * alpha * alpha) > 1e-6)
        throw ComponentsNotResolvable("generalized_cat_readout: coherent components overlap too much");
    if (std::abs(beta) > 0.1)
        throw std::invalid_argument("generalized_cat_readout: |beta| must be <= 0.1");
    const fock::FockVector psi0 = states::generalized_cat(4, 0, alpha, dim);
    const ModeOperator d = fock::displacement(beta, dim);
    fock::FockVector out{d.apply(psi0.amps)};

    const auto overlap_arg = [&](cplx comp) {
        const fock::FockVector c = states::coherent(comp, dim);
        return std::arg(fock::inner_product(c, out));
    };
    const double theta = (overlap_arg(cplx(alpha, 0.0)) - overlap_arg(cplx(-alpha, 0.0))) / 4.0;
    const double phi = (overlap_arg(cplx(0.0, -alpha)) - overlap_arg(cplx(0.0, alpha))) / 4.0;
    return {theta, phi};
}

}  // namespace fockforce::metrology
