#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fockforce/errors.hpp"
#include "fockforce/fock.hpp"
#include "fockforce/numerics.hpp"

namespace fockforce::states {

using fock::FockVector;
using fock::MultiModeState;
using numerics::cplx;

enum class Parity { Even, Odd };

enum class FamilyTag {
    Coherent,
    SqueezedVacuum,
    TwoModeSqueezed,
    Circle,
    EvenCat,
    OddCat,
    NModeCat,
    GeneralizedCat,
};

inline const char* family_name(FamilyTag t) {
    switch (t) {
        case FamilyTag::Coherent: return "coherent";
        case FamilyTag::SqueezedVacuum: return "squeezed";
        case FamilyTag::TwoModeSqueezed: return "twomodesq";
        case FamilyTag::Circle: return "circle";
        case FamilyTag::EvenCat: return "evencat";
        case FamilyTag::OddCat: return "oddcat";
        case FamilyTag::NModeCat: return "nmodecat";
        case FamilyTag::GeneralizedCat: return "gencat";
    }
    return "?";
}

/// Family descriptor used by the analysis layer and the CLI. Squeezing may
/// be given as r or lambda; they are canonicalized via lambda = tanh r.
struct StateFamily {
    FamilyTag tag = FamilyTag::Coherent;
    cplx alpha{0.0, 0.0};
    std::optional<double> r;
    std::optional<double> lambda;
    int n_modes = 1;
    int K = 1;
    int nu = 0;
};

inline void validate(const StateFamily& f) {
    if (f.n_modes < 1) throw std::invalid_argument("StateFamily: n_modes must be >= 1");
    if (f.K < 1) throw std::invalid_argument("StateFamily: K must be >= 1");
    if (f.nu < 0 || f.nu >= f.K) throw std::invalid_argument("StateFamily: nu must be in [0, K)");
    if (f.r && f.lambda && std::abs(*f.lambda - std::tanh(*f.r)) > 1e-12)
        throw std::invalid_argument("StateFamily: lambda and r inconsistent (lambda != tanh r)");
}

inline double canonical_lambda(const StateFamily& f) {
    validate(f);
    if (f.lambda) return *f.lambda;
    if (f.r) return std::tanh(*f.r);
    return 0.0;
}

inline double canonical_r(const StateFamily& f) {
    validate(f);
    if (f.r) return *f.r;
    if (f.lambda) return std::atanh(*f.lambda);
    return 0.0;
}

// Relative weight of the top three basis indices; the cheap operational
// test for "truncation adequate". The gate is deliberately looser than the
// 1e-10 tail budget asserted at rule-adequate dims, so that small working
// dims remain usable where tests only need coarse tolerances.
inline constexpr double kTailGate = 1e-3;

inline double tail_mass(const std::vector<double>& weights) {
    double total = 0.0, tail = 0.0;
    const std::size_t d = weights.size();
    for (std::size_t n = 0; n < d; ++n) {
        total += weights[n];
        if (n + 3 >= d) tail += weights[n];
    }
    return (total > 0.0) ? tail / total : 1.0;
}

inline void require_tail(const std::vector<double>& weights, const std::string& who) {
    const double t = tail_mass(weights);
    if (t > kTailGate)
        throw TruncationTooSmall(who + ": relative tail mass " + std::to_string(t) +
                                 " exceeds gate; increase dim");
}

// --- constructors ------------------------------------------------------------

/// |alpha>: amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!), log-space.
inline FockVector coherent(cplx alpha, int dim) {
    if (dim < 2) throw std::invalid_argument("coherent: dim must be >= 2");
    fock::require_truncation(std::abs(alpha), dim, "coherent");
    const double a2 = std::norm(alpha);
    const double la = (std::abs(alpha) > 0.0) ? std::log(std::abs(alpha)) : 0.0;
    const double ph = std::arg(alpha);
    std::vector<cplx> amps(std::size_t(dim));
    for (int n = 0; n < dim; ++n) {
        if (std::abs(alpha) == 0.0) {
            amps[std::size_t(n)] = (n == 0) ? 1.0 : 0.0;
            continue;
        }
        const double mag = std::exp(-0.5 * a2 + n * la - 0.5 * numerics::log_factorial(n));
        amps[std::size_t(n)] = std::polar(mag, double(n) * ph);
    }
    return fock::from_amplitudes(std::move(amps));
}

/// Squeezed vacuum with momentum-quadrature (Y) squeezing: amplitudes
/// sqrt(sech r) (tanh r)^k sqrt((2k)!)/(2^k k!) on |2k>. Negative r squeezes
/// X instead (alternating signs). Mean photon number sinh^2 r.
inline FockVector squeezed_vacuum(double r, int dim) {
    if (dim < 2) throw std::invalid_argument("squeezed_vacuum: dim must be >= 2");
    const double lam = std::tanh(r);
    std::vector<cplx> amps(std::size_t(dim));
    std::vector<double> w(std::size_t(dim));
    const double lsech = -std::log(std::cosh(r));
    for (int k = 0; 2 * k < dim; ++k) {
        const double lmag = 0.5 * lsech + k * std::log(std::max(std::abs(lam), 1e-300)) +
                            0.5 * numerics::log_factorial(2 * k) - k * std::numbers::ln2 -
                            numerics::log_factorial(k);
        double v = (k == 0) ? std::exp(0.5 * lsech) : ((lam == 0.0) ? 0.0 : std::exp(lmag));
        if (lam < 0.0 && (k % 2 == 1)) v = -v;
        amps[std::size_t(2 * k)] = v;
        w[std::size_t(2 * k)] = v * v;
    }
    require_tail(w, "squeezed_vacuum");
    return fock::from_amplitudes(std::move(amps));
}

/// Two-mode squeezed state sqrt(1-lambda^2) sum lambda^n |n,n>.
inline MultiModeState two_mode_squeezed(double lambda, int dim,
                                        std::size_t memory_cap = fock::kDefaultMemoryCap) {
    if (lambda < 0.0 || lambda >= 1.0)
        throw std::invalid_argument("two_mode_squeezed: lambda must be in [0,1)");
    if (dim < 2) throw std::invalid_argument("two_mode_squeezed: dim must be >= 2");
    MultiModeState s = fock::zero_state({dim, dim}, memory_cap);
    std::vector<double> w(std::size_t(dim));
    const double pref = std::sqrt(1.0 - lambda * lambda);
    double c = pref;
    for (int n = 0; n < dim; ++n) {
        s.amps[std::size_t(n) * std::size_t(dim) + std::size_t(n)] = c;
        w[std::size_t(n)] = c * c;
        c *= lambda;
    }
    require_tail(w, "two_mode_squeezed");
    fock::renormalize(s);
    return s;
}

inline double two_mode_squeezed_nbar(double lambda) {
    return lambda * lambda / (1.0 - lambda * lambda);  // per mode
}

/// Pair-coherent ("circle") state: sum c_n |n,n> with
/// c_n = alpha^n / (n! sqrt(I0(2 alpha))).
inline MultiModeState circle_state(double alpha, int dim,
                                   std::size_t memory_cap = fock::kDefaultMemoryCap) {
    if (alpha < 0.0) throw std::invalid_argument("circle_state: alpha must be >= 0");
    if (dim < 2) throw std::invalid_argument("circle_state: dim must be >= 2");
    MultiModeState s = fock::zero_state({dim, dim}, memory_cap);
    std::vector<double> w(std::size_t(dim));
    const double li0 = std::log(numerics::bessel_i(0, 2.0 * alpha));
    for (int n = 0; n < dim; ++n) {
        double v;
        if (alpha == 0.0) {
            v = (n == 0) ? 1.0 : 0.0;
        } else {
            v = std::exp(n * std::log(alpha) - numerics::log_factorial(n) - 0.5 * li0);
        }
        s.amps[std::size_t(n) * std::size_t(dim) + std::size_t(n)] = v;
        w[std::size_t(n)] = v * v;
    }
    require_tail(w, "circle_state");
    fock::renormalize(s);
    return s;
}

inline double circle_nbar(double alpha) {  // per mode
    if (alpha == 0.0) return 0.0;
    return alpha * numerics::bessel_i(1, 2.0 * alpha) / numerics::bessel_i(0, 2.0 * alpha);
}

/// Even/odd cat (|alpha> +/- |-alpha>) / sqrt(2 +/- 2 e^{-2|alpha|^2}),
/// built directly on its parity support so the opposite-parity amplitudes
/// are exactly zero.
inline FockVector cat(cplx alpha, Parity parity, int dim) {
    if (dim < 2) throw std::invalid_argument("cat: dim must be >= 2");
    const double aa = std::abs(alpha);
    if (parity == Parity::Odd && aa == 0.0)
        throw std::invalid_argument("cat: odd cat is undefined at alpha = 0");
    if (parity == Parity::Even && aa == 0.0) {
        std::vector<cplx> amps(std::size_t(dim));
        amps[0] = 1.0;
        return FockVector{std::move(amps)};
    }
    const double a2 = aa * aa;
    const double la = std::log(aa);
    const double ph = std::arg(alpha);
    const int residue = (parity == Parity::Even) ? 0 : 1;
    std::vector<cplx> amps(std::size_t(dim));
    std::vector<double> w(std::size_t(dim));
    for (int n = residue; n < dim; n += 2) {
        const double mag = std::exp(-0.5 * a2 + n * la - 0.5 * numerics::log_factorial(n));
        amps[std::size_t(n)] = std::polar(mag, double(n) * ph);
        w[std::size_t(n)] = mag * mag;
    }
    require_tail(w, "cat");
    return fock::from_amplitudes(std::move(amps));
}

inline double cat_nbar(double alpha, Parity parity) {
    const double x = alpha * alpha;
    if (parity == Parity::Even) return x * std::tanh(x);
    return x / std::tanh(x);
}

/// N-mode entangled cat (|a,...,a> + |-a,...,-a>) with the exact
/// normalization 1/sqrt(2 + 2 e^{-2 N alpha^2}); residual truncation error
/// is removed by a final renormalization.
inline MultiModeState n_mode_cat(double alpha, int n_modes, int dim,
                                 std::size_t memory_cap = fock::kDefaultMemoryCap) {
    if (n_modes < 1) throw std::invalid_argument("n_mode_cat: n_modes must be >= 1");
    if (dim < 2) throw std::invalid_argument("n_mode_cat: dim must be >= 2");
    // per-mode coherent pieces, unchecked tail here; gate on the per-mode weights
    std::vector<double> w(std::size_t(dim));
    std::vector<cplx> plus(std::size_t(dim));
    for (int n = 0; n < dim; ++n) {
        double mag = (alpha == 0.0)
                         ? ((n == 0) ? 1.0 : 0.0)
                         : std::exp(-0.5 * alpha * alpha + n * std::log(alpha) -
                                    0.5 * numerics::log_factorial(n));
        plus[std::size_t(n)] = mag;
        w[std::size_t(n)] = mag * mag;
    }
    require_tail(w, "n_mode_cat");
    std::vector<cplx> minus(plus);
    for (int n = 1; n < dim; n += 2) minus[std::size_t(n)] = -minus[std::size_t(n)];

    MultiModeState branch_p = fock::tensor_product(std::vector<FockVector>(
                                                       std::size_t(n_modes), FockVector{plus}),
                                                   memory_cap);
    MultiModeState branch_m = fock::tensor_product(std::vector<FockVector>(
                                                       std::size_t(n_modes), FockVector{minus}),
                                                   memory_cap);
    const double nrm = 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * n_modes * alpha * alpha));
    MultiModeState s = branch_p;
    for (std::size_t k = 0; k < s.amps.size(); ++k) s.amps[k] = nrm * (branch_p.amps[k] + branch_m.amps[k]);
    fock::renormalize(s);
    return s;
}

inline double n_mode_cat_ntot(double alpha, int n_modes) {
    const double x = double(n_modes) * alpha * alpha;
    if (x == 0.0) return 0.0;
    return x * std::tanh(x);
}

/// |K,nu> = sum_mu exp(2 pi i mu nu / K) |alpha e^{2 pi i mu / K}>, the
/// conditional state of a number-mod-K measurement. With this phase
/// convention the surviving number states obey n = -nu (mod K); the
/// cancellation is left to arithmetic rather than imposed, so off-residue
/// amplitudes vanish only to round-off.
inline FockVector generalized_cat(int K, int nu, double alpha, int dim) {
    if (K < 1) throw std::invalid_argument("generalized_cat: K must be >= 1");
    if (nu < 0 || nu >= K) throw std::invalid_argument("generalized_cat: nu must be in [0, K)");
    if (dim < 2) throw std::invalid_argument("generalized_cat: dim must be >= 2");
    std::vector<cplx> amps(std::size_t(dim));
    std::vector<double> w(std::size_t(dim));
    for (int mu = 0; mu < K; ++mu) {
        const double phase_mu = 2.0 * std::numbers::pi * mu * nu / K;
        const double comp_arg = 2.0 * std::numbers::pi * mu / K;
        for (int n = 0; n < dim; ++n) {
            double mag = (alpha == 0.0)
                             ? ((n == 0) ? 1.0 : 0.0)
                             : std::exp(-0.5 * alpha * alpha + n * std::log(alpha) -
                                        0.5 * numerics::log_factorial(n));
            amps[std::size_t(n)] += std::polar(mag, phase_mu + n * comp_arg);
        }
    }
    for (int n = 0; n < dim; ++n) w[std::size_t(n)] = std::norm(amps[std::size_t(n)]);
    require_tail(w, "generalized_cat");
    return fock::from_amplitudes(std::move(amps));
}

// --- family dispatch ---------------------------------------------------------

inline int default_dim(const StateFamily& f) {
    validate(f);
    switch (f.tag) {
        case FamilyTag::Coherent:
            return fock::recommended_dim(std::abs(f.alpha));
        case FamilyTag::SqueezedVacuum: {
            const double nb = std::sinh(canonical_r(f)) * std::sinh(canonical_r(f));
            return std::max(32, fock::recommended_dim(2.0 * std::sqrt(nb)));
        }
        case FamilyTag::TwoModeSqueezed: {
            const double nb = two_mode_squeezed_nbar(canonical_lambda(f));
            return std::max(32, fock::recommended_dim(2.0 * std::sqrt(nb)));
        }
        case FamilyTag::Circle:
        case FamilyTag::EvenCat:
        case FamilyTag::OddCat:
        case FamilyTag::NModeCat:
        case FamilyTag::GeneralizedCat:
            return fock::recommended_dim(std::abs(f.alpha));
    }
    return 32;
}

inline MultiModeState make_state(const StateFamily& f, int dim,
                                 std::size_t memory_cap = fock::kDefaultMemoryCap) {
    validate(f);
    switch (f.tag) {
        case FamilyTag::Coherent:
            return fock::single_mode_state(coherent(f.alpha, dim));
        case FamilyTag::SqueezedVacuum:
            return fock::single_mode_state(squeezed_vacuum(canonical_r(f), dim));
        case FamilyTag::TwoModeSqueezed:
            return two_mode_squeezed(canonical_lambda(f), dim, memory_cap);
        case FamilyTag::Circle:
            return circle_state(f.alpha.real(), dim, memory_cap);
        case FamilyTag::EvenCat:
            return fock::single_mode_state(cat(f.alpha, Parity::Even, dim));
        case FamilyTag::OddCat:
            return fock::single_mode_state(cat(f.alpha, Parity::Odd, dim));
        case FamilyTag::NModeCat:
            return n_mode_cat(f.alpha.real(), f.n_modes, dim, memory_cap);
        case FamilyTag::GeneralizedCat:
            return fock::single_mode_state(generalized_cat(f.K, f.nu, f.alpha.real(), dim));
    }
    throw std::invalid_argument("make_state: unknown family");
}

/// Closed-form mean photon number (total over all modes) where one exists.
inline double analytic_mean_photon(const StateFamily& f) {
    validate(f);
    switch (f.tag) {
        case FamilyTag::Coherent:
            return std::norm(f.alpha);
        case FamilyTag::SqueezedVacuum: {
            const double sh = std::sinh(canonical_r(f));
            return sh * sh;
        }
        case FamilyTag::TwoModeSqueezed:
            return 2.0 * two_mode_squeezed_nbar(canonical_lambda(f));
        case FamilyTag::Circle:
            return 2.0 * circle_nbar(f.alpha.real());
        case FamilyTag::EvenCat:
            return cat_nbar(std::abs(f.alpha), Parity::Even);
        case FamilyTag::OddCat:
            return cat_nbar(std::abs(f.alpha), Parity::Odd);
        case FamilyTag::NModeCat:
            return n_mode_cat_ntot(f.alpha.real(), f.n_modes);
        case FamilyTag::GeneralizedCat:
            return std::norm(f.alpha);  // alpha^2 up to e^{-alpha^2} corrections
    }
    return 0.0;
}

inline int mode_count(const StateFamily& f) {
    switch (f.tag) {
        case FamilyTag::TwoModeSqueezed:
        case FamilyTag::Circle:
            return 2;
        case FamilyTag::NModeCat:
            return f.n_modes;
        default:
            return 1;
    }
}

}  // namespace fockforce::states
