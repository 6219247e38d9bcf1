#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "fockforce/errors.hpp"

namespace fockforce::numerics {

using cplx = std::complex<double>;

/// Tolerances for the series and matrix kernels below. Defaults are chosen
/// so that truncation of the Fock space, not the special functions,
/// dominates every error budget downstream.
struct NumericsConfig {
    double series_tol = 1e-16;  // absolute term cutoff for power series
    double expm_tol = 1e-13;    // matrix-exponential truncation tolerance
    int max_terms = 500;        // series safety cap
};

inline constexpr int kMaxExpmDim = 4096;

/// ln(n!), exact cumulative sums for n < 2048, lgamma beyond.
inline double log_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(2048);
        t[0] = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k) t[k] = t[k - 1] + std::log(double(k));
        return t;
    }();
    if (n < 0) throw std::invalid_argument("log_factorial: n must be >= 0");
    if (n < int(table.size())) return table[std::size_t(n)];
    return std::lgamma(double(n) + 1.0);
}

/// Modified Bessel function I_o(x), o in {0,1}, x >= 0, by the ascending
/// power series sum_k (x/2)^{2k+o} / (k! (k+o)!).
inline double bessel_i(int order, double x, const NumericsConfig& cfg = {}) {
    if (order != 0 && order != 1) throw std::invalid_argument("bessel_i: order must be 0 or 1");
    if (x < 0.0) throw std::invalid_argument("bessel_i: x must be >= 0");
    const double h = 0.5 * x;
    double term = (order == 0) ? 1.0 : h;  // k = 0 term
    double sum = term;
    for (int k = 1; k <= cfg.max_terms; ++k) {
        term *= h * h / (double(k) * double(k + order));
        sum += term;
        if (term < cfg.series_tol) return sum;
    }
    throw NonConvergence("bessel_i: series did not reach tolerance within max_terms");
}

/// Dense row-major complex matrix. Small and deliberately minimal: the
/// simulator only needs multiply, adjoint and a couple of norms.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

    const std::vector<cplx>& data() const { return a_; }

    ComplexMatrix operator*(const ComplexMatrix& b) const {
        if (cols_ != b.rows_) throw DimensionMismatch("matrix multiply: inner dimensions differ");
        ComplexMatrix r(rows_, b.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int k = 0; k < cols_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                const cplx* brow = &b.a_[std::size_t(k) * b.cols_];
                cplx* rrow = &r.a_[std::size_t(i) * r.cols_];
                for (int j = 0; j < b.cols_; ++j) rrow[j] += aik * brow[j];
            }
        }
        return r;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        if (cols_ != int(v.size())) throw DimensionMismatch("matrix apply: size mismatch");
        std::vector<cplx> r(std::size_t(rows_));
        for (int i = 0; i < rows_; ++i) {
            cplx s = 0.0;
            const cplx* row = &a_[std::size_t(i) * cols_];
            for (int j = 0; j < cols_; ++j) s += row[j] * v[std::size_t(j)];
            r[std::size_t(i)] = s;
        }
        return r;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    void add_scaled(cplx alpha, const ComplexMatrix& x) {
        if (rows_ != x.rows_ || cols_ != x.cols_) throw DimensionMismatch("add_scaled: shape mismatch");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += alpha * x.a_[k];
    }

    void scale(cplx alpha) {
        for (auto& v : a_) v *= alpha;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double one_norm() const {  // max column sum
        double m = 0.0;
        for (int j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<cplx> a_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

/// exp(A) by scaling-and-squaring around a truncated Taylor core. For
/// skew-Hermitian A the result is unitary to within expm_tol * dim.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& a, const NumericsConfig& cfg = {}) {
    if (a.rows() != a.cols()) throw DimensionMismatch("matrix_exponential: matrix must be square");
    if (a.rows() > kMaxExpmDim) throw DimensionCapExceeded("matrix_exponential: dimension above cap");
    const int n = a.rows();
    if (n == 0) return a;

    const double norm = a.one_norm();
    int s = 0;
    if (norm > 0.5) s = int(std::ceil(std::log2(norm / 0.5)));

    ComplexMatrix b = a;
    b.scale(std::ldexp(1.0, -s));

    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    const double cutoff = cfg.expm_tol * 1e-3;
    bool converged = false;
    for (int k = 1; k <= 64; ++k) {
        term = term * b;
        term.scale(1.0 / double(k));
        result.add_scaled(1.0, term);
        if (term.max_abs() <= cutoff) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NonConvergence("matrix_exponential: Taylor core did not converge");

    for (int i = 0; i < s; ++i) result = result * result;
    return result;
}

/// Normalized oscillator eigenfunction in the quadrature variable y with
/// Y = -i(a - a^dag), so the vacuum density |psi_0(y)|^2 has unit variance.
/// Fills values for n = 0..nmax-1 using the three-term recurrence.
inline std::vector<double> hermite_wavefunctions(int nmax, double y) {
    std::vector<double> out(std::size_t(nmax));
    if (nmax <= 0) return out;
    const double q = y / std::sqrt(2.0);
    const double h0 = std::pow(2.0, -0.25) * std::pow(4.0 * std::atan(1.0), -0.25) *
                      std::exp(-0.5 * q * q);
    out[0] = h0;
    if (nmax > 1) out[1] = q * std::sqrt(2.0) * h0;
    for (int n = 2; n < nmax; ++n)
        out[std::size_t(n)] = q * std::sqrt(2.0 / n) * out[std::size_t(n - 1)] -
                              std::sqrt(double(n - 1) / n) * out[std::size_t(n - 2)];
    return out;
}

inline double hermite_wavefunction(int n, double y) {
    if (n < 0) throw std::invalid_argument("hermite_wavefunction: n must be >= 0");
    return hermite_wavefunctions(n + 1, y)[std::size_t(n)];
}

/// Stateless counter-based generator: the k-th value of a splitmix64
/// stream keyed by seed. Identical (seed, index) gives identical output
/// regardless of scheduling, which is what makes shot generation
/// embarrassingly parallel yet reproducible.
inline std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t index) {
    return double(counter_rng(seed, index) >> 11) * 0x1.0p-53;
}

}  // namespace fockforce::numerics
