#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fockforce/errors.hpp"
#include "fockforce/numerics.hpp"

namespace fockforce::fock {

using numerics::ComplexMatrix;
using numerics::cplx;
using numerics::NumericsConfig;

/// Dense single-mode operator on a truncated number basis.
using ModeOperator = numerics::ComplexMatrix;

inline constexpr std::size_t kDefaultMemoryCap = std::size_t(1) << 22;  // amplitudes

/// One oscillator mode: amplitudes <n|psi> for n = 0..dim-1.
struct FockVector {
    std::vector<cplx> amps;
    int dim() const { return int(amps.size()); }
};

/// Tensor-product state over N modes. Amplitudes are stored flattened
/// row-major with mode 0 slowest.
struct MultiModeState {
    std::vector<int> mode_dims;
    std::vector<cplx> amps;
    int n_modes() const { return int(mode_dims.size()); }
    std::size_t total_dim() const { return amps.size(); }
};

inline double norm(const FockVector& v) {
    double s = 0.0;
    for (const auto& a : v.amps) s += std::norm(a);
    return std::sqrt(s);
}

inline double norm(const MultiModeState& s) {
    double t = 0.0;
    for (const auto& a : s.amps) t += std::norm(a);
    return std::sqrt(t);
}

inline void renormalize(FockVector& v) {
    const double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("renormalize: zero vector");
    for (auto& a : v.amps) a /= n;
}

inline void renormalize(MultiModeState& s) {
    const double n = norm(s);
    if (n == 0.0) throw std::invalid_argument("renormalize: zero vector");
    for (auto& a : s.amps) a /= n;
}

inline FockVector from_amplitudes(std::vector<cplx> amps) {
    if (amps.size() < 2) throw std::invalid_argument("FockVector: dim must be >= 2");
    FockVector v{std::move(amps)};
    renormalize(v);
    return v;
}

inline std::size_t checked_total_dim(const std::vector<int>& dims, std::size_t memory_cap) {
    if (dims.empty()) throw std::invalid_argument("MultiModeState: need at least one mode");
    std::size_t total = 1;
    for (int d : dims) {
        if (d < 2) throw std::invalid_argument("MultiModeState: every mode dim must be >= 2");
        if (total > memory_cap / std::size_t(d))
            throw MemoryCapExceeded("MultiModeState: amplitude count above memory cap");
        total *= std::size_t(d);
    }
    return total;
}

inline MultiModeState zero_state(std::vector<int> dims, std::size_t memory_cap = kDefaultMemoryCap) {
    const std::size_t total = checked_total_dim(dims, memory_cap);
    MultiModeState s{std::move(dims), std::vector<cplx>(total)};
    return s;
}

inline MultiModeState single_mode_state(const FockVector& v) {
    return MultiModeState{{v.dim()}, v.amps};
}

inline MultiModeState tensor_product(const std::vector<FockVector>& parts,
                                     std::size_t memory_cap = kDefaultMemoryCap) {
    std::vector<int> dims;
    dims.reserve(parts.size());
    for (const auto& p : parts) dims.push_back(p.dim());
    MultiModeState s = zero_state(dims, memory_cap);
    s.amps.assign(1, cplx(1.0, 0.0));
    for (const auto& p : parts) {
        std::vector<cplx> next(s.amps.size() * p.amps.size());
        std::size_t idx = 0;
        for (const auto& a : s.amps)
            for (const auto& b : p.amps) next[idx++] = a * b;
        s.amps = std::move(next);
    }
    s.mode_dims = std::move(dims);
    return s;
}

/// Stride of `mode` in the flattened layout (mode 0 slowest).
inline std::size_t mode_stride(const MultiModeState& s, int mode) {
    std::size_t stride = 1;
    for (int m = s.n_modes() - 1; m > mode; --m) stride *= std::size_t(s.mode_dims[std::size_t(m)]);
    return stride;
}

// --- ladder operators -------------------------------------------------------

inline ModeOperator annihilation(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation: dim must be >= 2");
    ModeOperator a(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

inline ModeOperator creation(int dim) { return annihilation(dim).adjoint(); }

inline ModeOperator number_operator(int dim) {
    if (dim < 2) throw std::invalid_argument("number_operator: dim must be >= 2");
    ModeOperator n(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = double(k);
    return n;
}

/// Y = -i(a - a^dag); vacuum variance 1 in this convention.
inline ModeOperator quadrature_y(int dim) {
    ModeOperator y(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double r = std::sqrt(double(n));
        y(n - 1, n) = cplx(0.0, -r);
        y(n, n - 1) = cplx(0.0, r);
    }
    return y;
}

/// X = a + a^dag.
inline ModeOperator quadrature_x(int dim) {
    ModeOperator x(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double r = std::sqrt(double(n));
        x(n - 1, n) = r;
        x(n, n - 1) = r;
    }
    return x;
}

/// Truncation adequacy rule for a displacement (or coherent amplitude) of
/// magnitude |alpha|: keeps coherent-tail leakage below ~1e-12.
inline int recommended_dim(double abs_alpha) {
    return int(std::ceil(abs_alpha * abs_alpha + 6.0 * abs_alpha + 10.0));
}

inline void require_truncation(double abs_alpha, int dim, const std::string& who) {
    const int need = recommended_dim(abs_alpha);
    if (dim < need)
        throw TruncationTooSmall(who + ": dim " + std::to_string(dim) + " too small for |alpha| = " +
                                 std::to_string(abs_alpha) + ", need >= " + std::to_string(need));
}

/// D(beta) = exp(beta a^dag - beta^* a), built from the matrix exponential.
/// This is the production path; see displacement_analytic for the
/// independent closed-form construction used as a cross-check.
inline ModeOperator displacement(cplx beta, int dim, const NumericsConfig& cfg = {}) {
    require_truncation(std::abs(beta), dim, "displacement");
    ModeOperator g(dim, dim);
    for (int n = 1; n < dim; ++n) {
        const double r = std::sqrt(double(n));
        g(n, n - 1) = beta * r;               // beta a^dag
        g(n - 1, n) = -std::conj(beta) * r;   // -beta^* a
    }
    return numerics::matrix_exponential(g, cfg);
}

/// <m|D(beta)|n> in closed form via associated Laguerre polynomials.
/// Kept independent of matrix_exponential so the two constructions can
/// adjudicate each other.
inline ModeOperator displacement_analytic(cplx beta, int dim) {
    ModeOperator d(dim, dim);
    const double x = std::norm(beta);  // |beta|^2
    for (int lo = 0; lo < dim; ++lo) {
        // Laguerre recurrence in the upper index for fixed lower index lo.
        for (int hi = lo; hi < dim; ++hi) {
            const int k = hi - lo;
            // L_lo^{(k)}(x) by the three-term recurrence in the degree.
            double lm2 = 1.0, lm1 = 1.0 + k - x, lcur = (lo == 0) ? 1.0 : lm1;
            for (int m = 2; m <= lo; ++m) {
                lcur = ((2.0 * m - 1.0 + k - x) * lm1 - (m - 1.0 + k) * lm2) / double(m);
                lm2 = lm1;
                lm1 = lcur;
            }
            const double mag = std::exp(0.5 * numerics::log_factorial(lo) -
                                        0.5 * numerics::log_factorial(hi) - 0.5 * x);
            cplx pk(1.0, 0.0);
            for (int p = 0; p < k; ++p) pk *= beta;
            d(hi, lo) = mag * pk * lcur;
            if (hi != lo) {
                cplx qk(1.0, 0.0);
                for (int p = 0; p < k; ++p) qk *= -std::conj(beta);
                d(lo, hi) = mag * qk * lcur;
            }
        }
    }
    return d;
}

// --- multi-mode application -------------------------------------------------

/// (I x ... x op x ... x I) |state> without materializing the full matrix.
/// The result may be unnormalized.
inline MultiModeState apply_single_mode(const MultiModeState& s, const ModeOperator& op, int mode) {
    if (mode < 0 || mode >= s.n_modes()) throw std::invalid_argument("apply_single_mode: bad mode index");
    const int d = s.mode_dims[std::size_t(mode)];
    if (op.rows() != d || op.cols() != d)
        throw DimensionMismatch("apply_single_mode: operator dim does not match mode dim");

    const std::size_t stride = mode_stride(s, mode);
    const std::size_t block = stride * std::size_t(d);
    const std::size_t outer = s.total_dim() / block;

    MultiModeState out{s.mode_dims, std::vector<cplx>(s.total_dim())};
    std::vector<cplx> x(std::size_t(d)), y(std::size_t(d));
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * block;
        for (std::size_t in = 0; in < stride; ++in) {
            for (int j = 0; j < d; ++j) x[std::size_t(j)] = s.amps[base + std::size_t(j) * stride + in];
            for (int i = 0; i < d; ++i) {
                cplx acc = 0.0;
                for (int j = 0; j < d; ++j) acc += op(i, j) * x[std::size_t(j)];
                y[std::size_t(i)] = acc;
            }
            for (int i = 0; i < d; ++i) out.amps[base + std::size_t(i) * stride + in] = y[std::size_t(i)];
        }
    }
    return out;
}

enum class BsConvention {
    PhaseI,  // exp(-i theta (ai^dag aj + ai aj^dag))
    Real,    // exp(theta (ai^dag aj - ai aj^dag))
};

/// Two-mode mixing unitary. The generator conserves total photon number,
/// so it is exponentiated block-by-block over the n_i + n_j = T sectors;
/// norm and <n_i + n_j> are conserved exactly by construction.
inline MultiModeState beam_splitter(const MultiModeState& s, int i, int j, double theta,
                                    BsConvention conv, const NumericsConfig& cfg = {}) {
    if (i == j) throw std::invalid_argument("beam_splitter: modes must differ");
    if (i < 0 || j < 0 || i >= s.n_modes() || j >= s.n_modes())
        throw std::invalid_argument("beam_splitter: mode index out of range");
    const int d = s.mode_dims[std::size_t(i)];
    if (s.mode_dims[std::size_t(j)] != d)
        throw DimensionMismatch("beam_splitter: mixed modes must share a truncation dim");

    // Per-sector unitaries U_T = exp(G_T), sector basis n_i = lo..hi.
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(std::size_t(2 * d - 1));
    for (int T = 0; T <= 2 * (d - 1); ++T) {
        const int lo = std::max(0, T - (d - 1));
        const int hi = std::min(d - 1, T);
        const int m = hi - lo + 1;
        ComplexMatrix g(m, m);
        for (int k = 0; k + 1 < m; ++k) {
            const int n = lo + k;
            const double v = std::sqrt(double(n + 1) * double(T - n));
            if (conv == BsConvention::PhaseI) {
                g(k + 1, k) = cplx(0.0, -theta) * v;
                g(k, k + 1) = cplx(0.0, -theta) * v;
            } else {
                g(k + 1, k) = theta * v;
                g(k, k + 1) = -theta * v;
            }
        }
        blocks.push_back(numerics::matrix_exponential(g, cfg));
    }

    const std::size_t stride_i = mode_stride(s, i);
    const std::size_t stride_j = mode_stride(s, j);
    const std::size_t total = s.total_dim();

    MultiModeState out = s;
    std::vector<cplx> x, y;
    for (std::size_t f = 0; f < total; ++f) {
        const int ni = int(f / stride_i) % d;
        const int nj = int(f / stride_j) % d;
        if (ni != 0 || nj != 0) continue;  // enumerate slab bases only
        for (int T = 0; T <= 2 * (d - 1); ++T) {
            const int lo = std::max(0, T - (d - 1));
            const int hi = std::min(d - 1, T);
            const int m = hi - lo + 1;
            const ComplexMatrix& u = blocks[std::size_t(T)];
            x.assign(std::size_t(m), 0.0);
            for (int k = 0; k < m; ++k) {
                const int n = lo + k;
                x[std::size_t(k)] = s.amps[f + std::size_t(n) * stride_i + std::size_t(T - n) * stride_j];
            }
            for (int r = 0; r < m; ++r) {
                cplx acc = 0.0;
                for (int c = 0; c < m; ++c) acc += u(r, c) * x[std::size_t(c)];
                const int n = lo + r;
                out.amps[f + std::size_t(n) * stride_i + std::size_t(T - n) * stride_j] = acc;
            }
        }
    }
    return out;
}

// --- inner products and expectations ----------------------------------------

inline cplx inner_product(const FockVector& a, const FockVector& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("inner_product: dims differ");
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.amps.size(); ++k) s += std::conj(a.amps[k]) * b.amps[k];
    return s;
}

inline cplx inner_product(const MultiModeState& a, const MultiModeState& b) {
    if (a.mode_dims != b.mode_dims) throw DimensionMismatch("inner_product: mode dims differ");
    cplx s = 0.0;
    for (std::size_t k = 0; k < a.amps.size(); ++k) s += std::conj(a.amps[k]) * b.amps[k];
    return s;
}

inline double fidelity(const FockVector& a, const FockVector& b) {
    return std::norm(inner_product(a, b));
}

inline double fidelity(const MultiModeState& a, const MultiModeState& b) {
    return std::norm(inner_product(a, b));
}

struct OpAt {
    const ModeOperator* op;
    int mode;
};

/// <psi| op_1(m_1) op_2(m_2) ... |psi>, operators applied right to left.
inline cplx expectation(const MultiModeState& s, const std::vector<OpAt>& ops) {
    MultiModeState phi = s;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) phi = apply_single_mode(phi, *it->op, it->mode);
    return inner_product(s, phi);
}

inline cplx expectation(const MultiModeState& s, const ModeOperator& op, int mode) {
    return expectation(s, std::vector<OpAt>{{&op, mode}});
}

inline cplx expectation(const FockVector& v, const ModeOperator& op) {
    if (op.rows() != v.dim() || op.cols() != v.dim())
        throw DimensionMismatch("expectation: operator dim does not match state");
    const std::vector<cplx> w = op.apply(v.amps);
    cplx s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += std::conj(v.amps[k]) * w[k];
    return s;
}

/// Zero-pad a state into a larger truncation (headroom for operations that
/// redistribute photons, e.g. mixing two modes). new_dim < dim is refused.
inline FockVector embedded(const FockVector& v, int new_dim) {
    if (new_dim < v.dim()) throw std::invalid_argument("embedded: target dim smaller than source");
    FockVector out{std::vector<cplx>(std::size_t(new_dim))};
    std::copy(v.amps.begin(), v.amps.end(), out.amps.begin());
    return out;
}

inline MultiModeState embedded(const MultiModeState& s, const std::vector<int>& new_dims,
                               std::size_t memory_cap = kDefaultMemoryCap) {
    if (new_dims.size() != s.mode_dims.size())
        throw DimensionMismatch("embedded: mode count differs");
    for (std::size_t m = 0; m < new_dims.size(); ++m)
        if (new_dims[m] < s.mode_dims[m])
            throw std::invalid_argument("embedded: target dim smaller than source");
    MultiModeState out = zero_state(new_dims, memory_cap);
    const int nm = s.n_modes();
    std::vector<int> digits(std::size_t(nm));
    for (std::size_t f = 0; f < s.total_dim(); ++f) {
        std::size_t rem = f, g = 0;
        for (int m = nm - 1; m >= 0; --m) {
            digits[std::size_t(m)] = int(rem % std::size_t(s.mode_dims[std::size_t(m)]));
            rem /= std::size_t(s.mode_dims[std::size_t(m)]);
        }
        for (int m = 0; m < nm; ++m) g = g * std::size_t(new_dims[std::size_t(m)]) + std::size_t(digits[std::size_t(m)]);
        out.amps[g] = s.amps[f];
    }
    return out;
}

}  // namespace fockforce::fock
