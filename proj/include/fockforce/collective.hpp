#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "fockforce/errors.hpp"
#include "fockforce/metrology.hpp"
#include "fockforce/numerics.hpp"

// Collective-spin (Ramsey) side of the metrology module: SU(2) generators
// on N qubits, the Dicke ladder, and the phase-estimation bounds the three
// preparation schemes reach.

namespace fockforce::metrology {

using numerics::ComplexMatrix;

struct CollectiveSpinOps {
    int n_qubits = 0;
    ComplexMatrix jx, jy, jz;
};

inline constexpr int kMaxQubits = 12;

/// Jx, Jy, Jz = half-sums of single-qubit flips on the full 2^N space.
/// Basis convention: bit i of the index is qubit i, Z|0> = -|0>, Z|1> = |1>.
inline CollectiveSpinOps collective_spin(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("collective_spin: need at least one qubit");
    if (n_qubits > kMaxQubits)
        throw DimensionCapExceeded("collective_spin: n_qubits above cap of 12");
    const int dim = 1 << n_qubits;
    CollectiveSpinOps ops;
    ops.n_qubits = n_qubits;
    ops.jx = ComplexMatrix(dim, dim);
    ops.jy = ComplexMatrix(dim, dim);
    ops.jz = ComplexMatrix(dim, dim);
    for (int b = 0; b < dim; ++b) {
        const int ones = std::popcount(unsigned(b));
        ops.jz(b, b) = 0.5 * double(2 * ones - n_qubits);
        for (int q = 0; q < n_qubits; ++q) {
            const int flipped = b ^ (1 << q);
            ops.jx(flipped, b) += 0.5;
            // Y = i|1><0| - i|0><1| : matrix element out of |b> depends on bit q
            const bool bit = (b >> q) & 1;
            ops.jy(flipped, b) += bit ? numerics::cplx(0.0, -0.5) : numerics::cplx(0.0, 0.5);
        }
    }
    return ops;
}

/// Permutation-symmetric basis state with k excitations, amplitude
/// 1/sqrt(C(N,k)) on every bitstring of weight k.
inline std::vector<numerics::cplx> dicke_state(int n_qubits, int k) {
    if (k < 0 || k > n_qubits) throw std::invalid_argument("dicke_state: k out of range");
    const int dim = 1 << n_qubits;
    const double lc = numerics::log_factorial(n_qubits) - numerics::log_factorial(k) -
                      numerics::log_factorial(n_qubits - k);
    const double amp = std::exp(-0.5 * lc);
    std::vector<numerics::cplx> v(std::size_t(dim));
    for (int b = 0; b < dim; ++b)
        if (std::popcount(unsigned(b)) == k) v[std::size_t(b)] = amp;
    return v;
}

/// Applies J^2 = Jx^2 + Jy^2 + Jz^2 to every Dicke state and returns the
/// common Rayleigh quotient, verifying the (N/2)(N/2+1) action on the
/// symmetric subspace. Throws if the subspace is not an eigenspace.
inline double casimir_eigenvalue_check(const CollectiveSpinOps& ops) {
    const int n = ops.n_qubits;
    double eigenvalue = 0.0;
    for (int k = 0; k <= n; ++k) {
        const auto v = dicke_state(n, k);
        std::vector<numerics::cplx> w(v.size());
        for (const ComplexMatrix* j : {&ops.jx, &ops.jy, &ops.jz}) {
            const auto t = j->apply(j->apply(v));
            for (std::size_t b = 0; b < w.size(); ++b) w[b] += t[b];
        }
        numerics::cplx ray = 0.0;
        for (std::size_t b = 0; b < w.size(); ++b) ray += std::conj(v[b]) * w[b];
        double resid = 0.0;
        for (std::size_t b = 0; b < w.size(); ++b) resid += std::norm(w[b] - ray * v[b]);
        if (std::sqrt(resid) > 1e-8)
            throw std::runtime_error("casimir_eigenvalue_check: Dicke state is not an eigenvector");
        eigenvalue += ray.real();
    }
    return eigenvalue / double(n + 1);
}

enum class RamseyScheme { Product, GHZ, Pairwise };

/// Probe state of each scheme on the 2^N register.
inline std::vector<numerics::cplx> ramsey_state(int n_qubits, RamseyScheme scheme) {
    const int dim = 1 << n_qubits;
    std::vector<numerics::cplx> v(std::size_t(dim));
    switch (scheme) {
        case RamseyScheme::Product: {
            const double amp = std::pow(2.0, -0.5 * n_qubits);
            for (int b = 0; b < dim; ++b) v[std::size_t(b)] = amp;
            break;
        }
        case RamseyScheme::GHZ: {
            v[0] = 1.0 / std::sqrt(2.0);
            v[std::size_t(dim - 1)] = 1.0 / std::sqrt(2.0);
            break;
        }
        case RamseyScheme::Pairwise: {
            if (n_qubits % 2 != 0)
                throw OddPairCount("ramsey_state: pairwise scheme needs an even qubit count");
            // tensor power of (|00> + |11>)/sqrt(2), qubit pairs (0,1), (2,3), ...
            const int pairs = n_qubits / 2;
            const double amp = std::pow(2.0, -0.5 * pairs);
            for (int p = 0; p < (1 << pairs); ++p) {
                int b = 0;
                for (int q = 0; q < pairs; ++q)
                    if ((p >> q) & 1) b |= (0b11 << (2 * q));
                v[std::size_t(b)] = amp;
            }
            break;
        }
    }
    return v;
}

/// Var(sum_i Z_i) on a 2^N register state; sum Z is diagonal with
/// eigenvalue 2 popcount(b) - N.
inline double sum_z_variance(const std::vector<numerics::cplx>& state, int n_qubits) {
    if (state.size() != (std::size_t(1) << n_qubits))
        throw DimensionMismatch("sum_z_variance: state size is not 2^N");
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t b = 0; b < state.size(); ++b) {
        const double z = double(2 * std::popcount(unsigned(b)) - n_qubits);
        const double p = std::norm(state[b]);
        m1 += p * z;
        m2 += p * z * z;
    }
    return m2 - m1 * m1;
}

/// Closed-form generator variance of each scheme: N, N^2, 2N.
inline double ramsey_scheme_variance(int n_qubits, RamseyScheme scheme) {
    if (n_qubits < 1) throw std::invalid_argument("ramsey_scheme_variance: need at least one qubit");
    switch (scheme) {
        case RamseyScheme::Product: return double(n_qubits);
        case RamseyScheme::GHZ: return double(n_qubits) * double(n_qubits);
        case RamseyScheme::Pairwise:
            if (n_qubits % 2 != 0)
                throw OddPairCount("ramsey_scheme_variance: pairwise scheme needs an even qubit count");
            return 2.0 * double(n_qubits);
    }
    throw std::invalid_argument("ramsey_scheme_variance: unknown scheme");
}

/// delta_theta of the scheme. Computed from the closed-form variance via
/// estimation_bound; for N <= 10 the variance is cross-checked against the
/// full 2^N register state before use.
inline double ramsey_bounds(int n_qubits, RamseyScheme scheme) {
    const double var = ramsey_scheme_variance(n_qubits, scheme);
    if (n_qubits <= 10) {
        const double brute = sum_z_variance(ramsey_state(n_qubits, scheme), n_qubits);
        if (std::abs(brute - var) > 1e-12 * std::max(1.0, var))
            throw std::runtime_error("ramsey_bounds: closed form disagrees with brute force");
    }
    return estimation_bound(var, BoundConvention::PaperEqParameter).delta_theta;
}

}  // namespace fockforce::metrology
