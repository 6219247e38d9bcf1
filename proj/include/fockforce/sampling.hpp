#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fockforce/errors.hpp"
#include "fockforce/fock.hpp"
#include "fockforce/numerics.hpp"

// Seeded Monte Carlo readout. The analysis layer is purely analytic; this
// module turns each bound into an observable fact with reproducible shots.

namespace fockforce::sampling {

enum class Scheme { ParityReadout, Homodyne };

struct ShotRecord {
    Scheme scheme = Scheme::ParityReadout;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    double theta = 0.0;  // parity rotation angle (parity scheme only)
    std::vector<double> outcomes;  // 1/0 for parity, quadrature value for homodyne
};

struct EstimatorResult {
    double theta_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t shots = 0;
    bool boundary = false;  // k in {0, M}: arccos inversion degenerate
};

/// i.i.d. Bernoulli draws with P(+) = cos^2(theta), counter-keyed so the
/// sequence is independent of evaluation order.
inline ShotRecord sample_parity_readout(double theta, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_parity_readout: need at least one shot");
    const double p_plus = std::cos(theta) * std::cos(theta);
    ShotRecord rec{Scheme::ParityReadout, shots, seed, theta, {}};
    rec.outcomes.resize(shots);
    for (std::uint64_t k = 0; k < shots; ++k)
        rec.outcomes[k] = (numerics::uniform01(seed, k) < p_plus) ? 1.0 : 0.0;
    return rec;
}

/// theta_hat = arccos(sqrt(k/M)); the binomial delta method gives
/// std_error = 1/(2 sqrt(M)) independent of theta.
inline EstimatorResult estimate_theta(const ShotRecord& rec) {
    if (rec.scheme != Scheme::ParityReadout)
        throw std::invalid_argument("estimate_theta: record is not a parity readout");
    if (rec.shots < 1) throw std::invalid_argument("estimate_theta: empty record");
    std::uint64_t plus = 0;
    for (double o : rec.outcomes) plus += (o > 0.5) ? 1 : 0;
    EstimatorResult res;
    res.shots = rec.shots;
    res.boundary = (plus == 0 || plus == rec.shots);
    const double frac = double(plus) / double(rec.shots);
    res.theta_hat = std::acos(std::sqrt(std::clamp(frac, 0.0, 1.0)));
    res.std_error = 0.5 / std::sqrt(double(rec.shots));
    return res;
}

struct HomodyneGrid {
    double y_min = -10.0;
    double y_max = 10.0;
    double step = 1e-3;
};

/// Probability density of a Y-quadrature measurement at y. The Y
/// eigenbasis is the position basis of the pi/2-rotated state, so the
/// amplitudes pick up (-i)^n before the real oscillator eigenfunctions.
inline double homodyne_density(const fock::FockVector& state, double y) {
    const int d = state.dim();
    const std::vector<double> h = numerics::hermite_wavefunctions(d, y);
    numerics::cplx s = 0.0;
    numerics::cplx ph(1.0, 0.0);  // (-i)^n
    for (int n = 0; n < d; ++n) {
        s += state.amps[std::size_t(n)] * ph * h[std::size_t(n)];
        ph *= numerics::cplx(0.0, -1.0);
    }
    return std::norm(s);
}

struct GridDistribution {
    std::vector<double> y;
    std::vector<double> pdf;
    std::vector<double> cdf;  // trapezoid cumulative, cdf.back() ~= 1
};

inline GridDistribution grid_distribution(const fock::FockVector& state, const HomodyneGrid& grid) {
    if (!(grid.step > 0.0) || !(grid.y_max > grid.y_min))
        throw std::invalid_argument("grid_distribution: bad grid");
    const std::size_t npts = std::size_t(std::floor((grid.y_max - grid.y_min) / grid.step)) + 1;
    GridDistribution g;
    g.y.resize(npts);
    g.pdf.resize(npts);
    g.cdf.resize(npts);
    for (std::size_t k = 0; k < npts; ++k) {
        g.y[k] = grid.y_min + double(k) * grid.step;
        g.pdf[k] = homodyne_density(state, g.y[k]);
    }
    double acc = 0.0;
    g.cdf[0] = 0.0;
    for (std::size_t k = 1; k < npts; ++k) {
        acc += 0.5 * (g.pdf[k - 1] + g.pdf[k]) * grid.step;
        g.cdf[k] = acc;
    }
    if (std::abs(1.0 - acc) > 1e-9)
        throw GridTooNarrow("grid_distribution: probability mass outside grid exceeds 1e-9");
    return g;
}

/// Inverse-CDF draws of y from |sum_n c_n (-i)^n psi_n(y)|^2 on the grid,
/// with linear interpolation inside each cell.
inline ShotRecord sample_homodyne(const fock::FockVector& state, std::uint64_t shots,
                                  std::uint64_t seed, const HomodyneGrid& grid) {
    if (shots < 1) throw std::invalid_argument("sample_homodyne: need at least one shot");
    const GridDistribution g = grid_distribution(state, grid);
    const double total = g.cdf.back();
    ShotRecord rec{Scheme::Homodyne, shots, seed, 0.0, {}};
    rec.outcomes.resize(shots);
    for (std::uint64_t k = 0; k < shots; ++k) {
        const double u = numerics::uniform01(seed, k) * total;
        const auto it = std::upper_bound(g.cdf.begin(), g.cdf.end(), u);
        std::size_t hi = std::min(std::size_t(it - g.cdf.begin()), g.cdf.size() - 1);
        if (hi == 0) hi = 1;
        const double c0 = g.cdf[hi - 1], c1 = g.cdf[hi];
        const double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
        rec.outcomes[k] = g.y[hi - 1] + frac * (g.y[hi] - g.y[hi - 1]);
    }
    return rec;
}

inline std::pair<double, double> sample_moments(const ShotRecord& rec) {
    double m1 = 0.0, m2 = 0.0;
    for (double o : rec.outcomes) {
        m1 += o;
        m2 += o * o;
    }
    m1 /= double(rec.outcomes.size());
    m2 /= double(rec.outcomes.size());
    return {m1, m2 - m1 * m1};
}

}  // namespace fockforce::sampling
