#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "fockforce/collective.hpp"
#include "fockforce/fock.hpp"
#include "fockforce/io.hpp"
#include "fockforce/metrology.hpp"
#include "fockforce/numerics.hpp"
#include "fockforce/sampling.hpp"
#include "fockforce/states.hpp"
#include "fockforce/sweep.hpp"

// Built-in verification suite: every analytic result the simulator claims
// to reproduce, plus the module invariants, as one flat list of checks.
// `fockforce verify` and the acceptance test binary both run this.

namespace fockforce::verify {

using fock::FockVector;
using fock::MultiModeState;
using numerics::cplx;
using states::FamilyTag;
using states::StateFamily;

struct CheckResult {
    std::string id;
    std::string description;
    bool pass = false;
    double measured = 0.0;  // worst deviation (or margin metric) observed
    double bound = 0.0;     // what it must stay below
    std::string note;
};

namespace detail {

template <typename F>
void run_check(std::vector<CheckResult>& out, const std::string& id, const std::string& desc,
               F&& body) {
    CheckResult r;
    r.id = id;
    r.description = desc;
    try {
        body(r);
        if (r.note.empty()) r.pass = (r.measured <= r.bound);
    } catch (const std::exception& e) {
        r.pass = false;
        r.note = e.what();
    }
    out.push_back(std::move(r));
}

inline cplx random_cplx(std::uint64_t seed, std::uint64_t& ctr) {
    const double re = 2.0 * numerics::uniform01(seed, ctr++) - 1.0;
    const double im = 2.0 * numerics::uniform01(seed, ctr++) - 1.0;
    return {re, im};
}

inline MultiModeState random_two_mode_state(int dim, std::uint64_t seed, std::uint64_t& ctr) {
    MultiModeState s = fock::zero_state({dim, dim});
    for (auto& a : s.amps) a = random_cplx(seed, ctr);
    fock::renormalize(s);
    return s;
}

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(n);
    my /= double(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return num / den;
}

}  // namespace detail

// --- acceptance criteria -------------------------------------------------------

inline void acceptance_checks(std::vector<CheckResult>& out, const io::RunConfig& cfg) {
    using detail::run_check;
    const auto dim_or = [&](int d) { return cfg.dim ? *cfg.dim : d; };

    run_check(out, "A1.sql", "coherent-probe SQL: eps_min = 0.5", [&](CheckResult& r) {
        StateFamily f;
        f.tag = FamilyTag::Coherent;
        const auto rep = metrology::min_detectable_force(f, dim_or(32), cfg.memory_cap);
        r.measured = std::abs(rep.epsilon_min - 0.5);
        r.bound = 1e-6;
    });

    run_check(out, "A2.squeezed", "squeezed probe: eps_min = 1/(2 e^r), Var(Y) = e^{-2r}",
              [&](CheckResult& r) {
                  double worst_eps = 0.0, worst_var = 0.0;
                  for (double rr : {0.5, 1.0}) {
                      StateFamily f;
                      f.tag = FamilyTag::SqueezedVacuum;
                      f.r = rr;
                      const auto rep = metrology::min_detectable_force(f, dim_or(64), cfg.memory_cap);
                      worst_eps = std::max(worst_eps,
                                           std::abs(rep.epsilon_min - 0.5 * std::exp(-rr)) / 1e-4);
                      worst_var = std::max(worst_var,
                                           std::abs(rep.variance - std::exp(-2.0 * rr)) / 1e-5);
                  }
                  r.measured = std::max(worst_eps, worst_var);  // in units of the tolerance
                  r.bound = 1.0;
              });

    run_check(out, "A3.tmsv", "two-mode squeezed: eps_min = 1/(2 sqrt(2) e), sqrt(2) gain",
              [&](CheckResult& r) {
                  StateFamily tm;
                  tm.tag = FamilyTag::TwoModeSqueezed;
                  tm.r = 1.0;
                  StateFamily sq;
                  sq.tag = FamilyTag::SqueezedVacuum;
                  sq.r = 1.0;
                  const auto rep_tm = metrology::min_detectable_force(tm, dim_or(64), cfg.memory_cap);
                  const auto rep_sq = metrology::min_detectable_force(sq, dim_or(64), cfg.memory_cap);
                  const double target = 1.0 / (2.0 * std::sqrt(2.0) * std::exp(1.0));
                  const double dev_abs = std::abs(rep_tm.epsilon_min - target) / 2e-4;
                  const double dev_ratio =
                      std::abs(rep_tm.epsilon_min / rep_sq.epsilon_min - 1.0 / std::sqrt(2.0)) / 1e-4;
                  r.measured = std::max(dev_abs, dev_ratio);
                  r.bound = 1.0;
              });

    run_check(out, "A4.circle", "circle state: eps_min(0.85) = 0.221108, sweep minimum, 0.25 asymptote",
              [&](CheckResult& r) {
                  StateFamily f;
                  f.tag = FamilyTag::Circle;
                  f.alpha = 0.85;
                  const auto rep = metrology::min_detectable_force(f, dim_or(24), cfg.memory_cap);
                  const double analytic = metrology::circle_epsilon_min_analytic(0.85);
                  const double d1 = std::abs(rep.epsilon_min - 0.221108) / 2e-4;
                  const double d2 = std::abs(rep.epsilon_min - analytic) / 2e-4;

                  sweep::SweepSpec spec;
                  spec.base.tag = FamilyTag::Circle;
                  spec.axis = "alpha";
                  spec.values = sweep::linspace(0.1, 3.0, 30);
                  const auto rows = sweep::run_sweep(spec, cfg, 1);
                  double best = 1e300, best_alpha = 0.0;
                  for (const auto& row : rows)
                      if (row.ok && row.report.epsilon_min < best) {
                          best = row.report.epsilon_min;
                          best_alpha = row.value;
                      }
                  // 0.85 sits exactly between two grid points; either neighbour
                  // qualifies as "nearest".
                  const double d3 = (std::abs(best_alpha - 0.85) <= 0.05 + 1e-9) ? 0.0 : 2.0;

                  StateFamily f6;
                  f6.tag = FamilyTag::Circle;
                  f6.alpha = 6.0;
                  const auto rep6 = metrology::min_detectable_force(f6, dim_or(84), cfg.memory_cap);
                  const double d4 = std::abs(rep6.epsilon_min - 0.25) / 0.006;

                  r.measured = std::max({d1, d2, d3, d4});
                  r.bound = 1.0;
              });

    run_check(out, "A5.pair_variance",
              "Var(Y1+Y2) = 2(1 + <n_a+n_b> - <a'b'+ab>) on circle and TMSV", [&](CheckResult& r) {
                  const auto identity_gap = [&](const MultiModeState& s0) {
                      const int d = s0.mode_dims[0];
                      const auto a = fock::annihilation(d);
                      const auto ad = fock::creation(d);
                      const auto n = fock::number_operator(d);
                      const double nsum = (fock::expectation(s0, n, 0) + fock::expectation(s0, n, 1)).real();
                      const double cross =
                          (fock::expectation(s0, {{&ad, 0}, {&ad, 1}}) +
                           fock::expectation(s0, {{&a, 0}, {&a, 1}}))
                              .real();
                      const double rhs = 2.0 * (1.0 + nsum - cross);
                      const auto disp = metrology::apply_weak_force(s0, {0.1, std::nullopt, true});
                      const auto [sv, vv] = metrology::quadrature_stats(disp);
                      (void)sv;
                      return std::pair{std::abs(vv - rhs), rhs};
                  };
                  const auto [gap_c, rhs_c] = identity_gap(states::circle_state(0.85, dim_or(24)));
                  (void)rhs_c;
                  const auto [gap_t, rhs_t] =
                      identity_gap(states::two_mode_squeezed(std::tanh(1.0), dim_or(64)));
                  const double tm_value = std::abs(rhs_t - 2.0 * std::exp(-2.0)) / 1e-5;
                  r.measured = std::max({gap_c / 1e-8, gap_t / 1e-8, tm_value});
                  r.bound = 1.0;
              });

    run_check(out, "A6.beam_splitter",
              "pi/4 mixer: |a,a> -> |sqrt2 a,0>; 2-mode cat -> cat x vac; TMSV -> opposite squeezers",
              [&](CheckResult& r) {
                  // dims sized for the output amplitude sqrt(2) alpha
                  const double al = 1.5;
                  const int d1 = dim_or(fock::recommended_dim(std::sqrt(2.0) * al));
                  const auto in1 = fock::tensor_product({states::coherent(al, d1), states::coherent(al, d1)});
                  const auto out1 = fock::beam_splitter(in1, 0, 1, std::numbers::pi / 4,
                                                        fock::BsConvention::Real);
                  const auto tgt1 = fock::tensor_product(
                      {states::coherent(std::sqrt(2.0) * al, d1), states::coherent(0.0, d1)});
                  const double gap1 = (1.0 - fock::fidelity(out1, tgt1)) / 1e-8;

                  const double ac = 2.0;
                  const int d2 = dim_or(fock::recommended_dim(std::sqrt(2.0) * ac));
                  const auto in2 = states::n_mode_cat(ac, 2, d2);
                  const auto out2 = fock::beam_splitter(in2, 0, 1, std::numbers::pi / 4,
                                                        fock::BsConvention::Real);
                  const auto tgt2 = fock::tensor_product(
                      {states::cat(std::sqrt(2.0) * ac, states::Parity::Even, d2),
                       states::coherent(0.0, d2)});
                  const double gap2 = (1.0 - fock::fidelity(out2, tgt2)) / 1e-8;

                  // TMSV constructed at dim 40; the mixer redistributes photons
                  // across the pair, so it runs with headroom dims.
                  const int d3 = dim_or(40);
                  const int d3w = std::max(64, d3);
                  const auto tmsv = fock::embedded(states::two_mode_squeezed(std::tanh(1.0), d3),
                                                   {d3w, d3w});
                  const auto out3 = fock::beam_splitter(tmsv, 0, 1, std::numbers::pi / 4,
                                                        fock::BsConvention::Real);
                  const auto tgt3 = fock::tensor_product(
                      {states::squeezed_vacuum(1.0, d3w), states::squeezed_vacuum(-1.0, d3w)});
                  const double gap3 = (1.0 - fock::fidelity(out3, tgt3)) / 1e-6;

                  r.measured = std::max({gap1, gap2, gap3});
                  r.bound = 1.0;
              });

    run_check(out, "A7.cat_variance",
              "Var(sum sigma_x) = N^2 on the N-mode cat; bound scales as 1/(N alpha)",
              [&](CheckResult& r) {
                  double worst = 0.0;
                  for (int n = 1; n <= 3; ++n) {
                      const double v2 = metrology::cat_generator_variance(2.0, n, dim_or(26),
                                                                          cfg.memory_cap);
                      worst = std::max(worst, std::abs(v2 / double(n * n) - 1.0) / 0.01);
                      const double v3 = metrology::cat_generator_variance(3.0, n, dim_or(40),
                                                                          cfg.memory_cap);
                      worst = std::max(worst, std::abs(v3 / double(n * n) - 1.0) / 1e-6);
                  }
                  std::vector<double> ns, bounds;
                  for (int n = 1; n <= 4; ++n) {
                      const auto rep = metrology::cat_sensitivity_report(
                          2.0, n, dim_or(26), metrology::BoundConvention::PaperEqParameter,
                          cfg.memory_cap);
                      ns.push_back(double(n));
                      bounds.push_back(rep.epsilon_min);
                  }
                  const double slope = detail::loglog_slope(ns, bounds);
                  worst = std::max(worst, std::abs(slope + 1.0) / 0.02);
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "A8.generalized_cat",
              "|K,nu> eigenvector of exp(i 2 pi n/K); K=4 readout recovers theta and phi",
              [&](CheckResult& r) {
                  double worst = 0.0;
                  const double ae = 2.5;
                  for (const auto& [K, nu] : std::vector<std::pair<int, int>>{
                           {2, 0}, {2, 1}, {4, 0}, {4, 1}, {4, 3}}) {
                      const auto psi = states::generalized_cat(K, nu, ae, dim_or(32));
                      const cplx eig = std::polar(1.0, -2.0 * std::numbers::pi * nu / K);
                      double resid = 0.0;
                      for (int n = 0; n < psi.dim(); ++n) {
                          const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * n / K);
                          resid += std::norm((u - eig) * psi.amps[std::size_t(n)]);
                      }
                      worst = std::max(worst, std::sqrt(resid) / 1e-9);
                  }
                  const auto [t1, p1] = metrology::generalized_cat_readout(3.0, cplx(0.0, 0.01),
                                                                           dim_or(48));
                  worst = std::max(worst, std::abs(t1 - 0.03) / 5e-3);
                  worst = std::max(worst, std::abs(p1 - 0.0) / 5e-3);
                  const auto [t2, p2] = metrology::generalized_cat_readout(3.0, cplx(0.01, 0.0),
                                                                           dim_or(48));
                  worst = std::max(worst, std::abs(t2 - 0.0) / 5e-3);
                  worst = std::max(worst, std::abs(p2 - 0.03) / 5e-3);
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "A9.ramsey", "Ramsey bounds 1/sqrt(N), 1/N, 1/sqrt(2N); Casimir (N/2)(N/2+1)",
              [&](CheckResult& r) {
                  using metrology::RamseyScheme;
                  double worst = 0.0;
                  if (metrology::ramsey_bounds(4, RamseyScheme::Product) != 1.0 / std::sqrt(4.0))
                      worst = 2.0;
                  if (metrology::ramsey_bounds(4, RamseyScheme::GHZ) != 1.0 / 4.0) worst = 2.0;
                  if (metrology::ramsey_bounds(4, RamseyScheme::Pairwise) != 1.0 / std::sqrt(8.0))
                      worst = 2.0;
                  for (int n = 1; n <= 8; ++n) {
                      for (auto scheme : {RamseyScheme::Product, RamseyScheme::GHZ}) {
                          const double brute = metrology::sum_z_variance(
                              metrology::ramsey_state(n, scheme), n);
                          const double closed = metrology::ramsey_scheme_variance(n, scheme);
                          worst = std::max(worst, std::abs(brute - closed) / 1e-12);
                      }
                      if (n % 2 == 0) {
                          const double brute = metrology::sum_z_variance(
                              metrology::ramsey_state(n, RamseyScheme::Pairwise), n);
                          worst = std::max(worst, std::abs(brute - 2.0 * n) / 1e-12);
                      }
                  }
                  for (int n = 1; n <= 6; ++n) {
                      const auto ops = metrology::collective_spin(n);
                      const double eig = metrology::casimir_eigenvalue_check(ops);
                      const double want = 0.5 * n * (0.5 * n + 1.0);
                      worst = std::max(worst, std::abs(eig - want) / 1e-10);
                  }
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "A10.monte_carlo",
              "parity-shot std matches 1/(2 sqrt(M)); homodyne vacuum variance; reproducible",
              [&](CheckResult& r) {
                  const std::uint64_t m = 10000;
                  const int reps = 200;
                  std::vector<double> hats(reps);
                  for (int k = 0; k < reps; ++k) {
                      const std::uint64_t s = numerics::counter_rng(cfg.seed, 1000 + std::uint64_t(k));
                      hats[std::size_t(k)] =
                          sampling::estimate_theta(sampling::sample_parity_readout(0.3, m, s)).theta_hat;
                  }
                  double mean = 0.0;
                  for (double h : hats) mean += h;
                  mean /= reps;
                  double var = 0.0;
                  for (double h : hats) var += (h - mean) * (h - mean);
                  var /= (reps - 1);
                  const double want = 0.5 / std::sqrt(double(m));
                  const double d1 = std::abs(std::sqrt(var) / want - 1.0) / 0.2;

                  const auto vac = states::coherent(0.0, dim_or(16));
                  const auto rec = sampling::sample_homodyne(vac, 100000, cfg.seed, {});
                  const auto [sm, sv] = sampling::sample_moments(rec);
                  (void)sm;
                  const double d2 = std::abs(sv - 1.0) / 0.03;

                  const auto rec2 = sampling::sample_homodyne(vac, 100000, cfg.seed, {});
                  const double d3 = (rec.outcomes == rec2.outcomes) ? 0.0 : 2.0;
                  r.measured = std::max({d1, d2, d3});
                  r.bound = 1.0;
              });

    run_check(out, "A11.determinism", "sweep bytes identical under sequential and parallel runs",
              [&](CheckResult& r) {
                  sweep::SweepSpec spec;
                  spec.base.tag = FamilyTag::SqueezedVacuum;
                  spec.axis = "r";
                  spec.values = {0.0, 0.5, 1.0};
                  const auto rows1 = sweep::run_sweep(spec, cfg, 1);
                  const auto rows4 = sweep::run_sweep(spec, cfg, 4);
                  const std::string csv1 = sweep::sweep_csv(spec, rows1);
                  const std::string csv4 = sweep::sweep_csv(spec, rows4);
                  r.measured = (csv1 == csv4) ? 0.0 : 2.0;
                  r.bound = 1.0;
                  // eps_min column sanity: 1/(2 e^r) on the grid
                  for (std::size_t i = 0; i < rows1.size(); ++i) {
                      if (!rows1[i].ok) {
                          r.measured = 2.0;
                          break;
                      }
                      const double want = 0.5 * std::exp(-spec.values[i]);
                      if (std::abs(rows1[i].report.epsilon_min - want) > 1e-4) r.measured = 2.0;
                  }
              });
}

// --- module invariants -----------------------------------------------------------

inline void invariant_checks(std::vector<CheckResult>& out, const io::RunConfig& cfg) {
    using detail::run_check;

    run_check(out, "I.numerics.expm_unitary", "exp of skew-Hermitian is unitary to 1e-10",
              [&](CheckResult& r) {
                  std::uint64_t ctr = 0;
                  double worst = 0.0;
                  for (int trial = 0; trial < 6; ++trial) {
                      const int d = (trial % 2 == 0) ? 8 : 24;
                      numerics::ComplexMatrix a(d, d);
                      for (int i = 0; i < d; ++i)
                          for (int j = i; j < d; ++j) {
                              const cplx v = detail::random_cplx(cfg.seed ^ 0xABCD, ctr);
                              a(i, j) = v;
                              a(j, i) = -std::conj(v);
                          }
                      const double nrm = a.one_norm();
                      if (nrm > 10.0) a.scale(10.0 / nrm);  // stay within the tested ball
                      const auto e = numerics::matrix_exponential(a);
                      auto g = e * e.adjoint();
                      g.add_scaled(-1.0, numerics::ComplexMatrix::identity(d));
                      worst = std::max(worst, g.max_abs());
                  }
                  r.measured = worst;
                  r.bound = 1e-10;
              });

    run_check(out, "I.numerics.bessel", "I0 >= 1 and increasing on x in {0, 0.5, ..., 10}",
              [&](CheckResult& r) {
                  double prev = 0.999;
                  double worst = 0.0;
                  for (double x = 0.0; x <= 10.0; x += 0.5) {
                      const double v = numerics::bessel_i(0, x);
                      if (v < 1.0 || v <= prev) worst = 1.0;
                      prev = v;
                  }
                  r.measured = worst;
                  r.bound = 0.5;
              });

    run_check(out, "I.numerics.log_factorial", "lf(n) - lf(n-1) = ln n to 1e-12, n <= 400",
              [&](CheckResult& r) {
                  double worst = 0.0;
                  for (int n = 1; n <= 400; ++n)
                      worst = std::max(worst, std::abs(numerics::log_factorial(n) -
                                                       numerics::log_factorial(n - 1) -
                                                       std::log(double(n))) /
                                                  std::max(1.0, std::log(double(n))));
                  r.measured = worst;
                  r.bound = 1e-12;
              });

    run_check(out, "I.numerics.hermite_orthonormal",
              "grid quadrature Gram of psi_n, n <= 20, within 1e-6 of identity", [&](CheckResult& r) {
                  const int nmax = 21;
                  const double step = 1e-3;
                  std::vector<std::vector<double>> vals;
                  std::vector<double> gram(nmax * nmax, 0.0);
                  for (double y = -10.0; y <= 10.0 + 1e-12; y += step) {
                      const auto h = numerics::hermite_wavefunctions(nmax, y);
                      const double w = (std::abs(std::abs(y) - 10.0) < step / 2) ? 0.5 : 1.0;
                      for (int i = 0; i < nmax; ++i)
                          for (int j = i; j < nmax; ++j)
                              gram[std::size_t(i) * nmax + j] += w * h[std::size_t(i)] * h[std::size_t(j)] * step;
                  }
                  double worst = 0.0;
                  for (int i = 0; i < nmax; ++i)
                      for (int j = i; j < nmax; ++j) {
                          const double want = (i == j) ? 1.0 : 0.0;
                          worst = std::max(worst, std::abs(gram[std::size_t(i) * nmax + j] - want));
                      }
                  r.measured = worst;
                  r.bound = 1e-6;
              });

    run_check(out, "I.fock.commutator", "[a, a^dag] = I away from the truncation edge",
              [&](CheckResult& r) {
                  const int d = 16;
                  const auto a = fock::annihilation(d);
                  const auto ad = fock::creation(d);
                  auto comm = a * ad;
                  comm.add_scaled(-1.0, ad * a);
                  double worst = 0.0;
                  for (int i = 0; i < d - 1; ++i)
                      for (int j = 0; j < d - 1; ++j)
                          worst = std::max(worst, std::abs(comm(i, j) - ((i == j) ? 1.0 : 0.0)));
                  r.measured = worst;
                  r.bound = 1e-13;
              });

    run_check(out, "I.fock.beam_splitter", "mixer preserves norm and total photon number",
              [&](CheckResult& r) {
                  std::uint64_t ctr = 0;
                  double worst = 0.0;
                  for (int trial = 0; trial < 4; ++trial) {
                      const auto s = detail::random_two_mode_state(12, cfg.seed ^ 0x5EED, ctr);
                      const auto conv = (trial % 2 == 0) ? fock::BsConvention::PhaseI
                                                         : fock::BsConvention::Real;
                      const double theta = 0.3 + 0.4 * trial;
                      const auto o = fock::beam_splitter(s, 0, 1, theta, conv);
                      worst = std::max(worst, std::abs(1.0 - fock::norm(o)) / 1e-10);
                      const auto n = fock::number_operator(12);
                      const double before =
                          (fock::expectation(s, n, 0) + fock::expectation(s, n, 1)).real();
                      const double after =
                          (fock::expectation(o, n, 0) + fock::expectation(o, n, 1)).real();
                      worst = std::max(worst, std::abs(before - after) / 1e-9);
                  }
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "I.fock.apply_single_mode", "matches the Kronecker oracle; distinct modes commute",
              [&](CheckResult& r) {
                  std::uint64_t ctr = 0;
                  const int d = 4;
                  numerics::ComplexMatrix op1(d, d), op2(d, d);
                  for (int i = 0; i < d; ++i)
                      for (int j = 0; j < d; ++j) {
                          op1(i, j) = detail::random_cplx(cfg.seed ^ 0xF0CC, ctr);
                          op2(i, j) = detail::random_cplx(cfg.seed ^ 0xF0CC, ctr);
                      }
                  auto s = detail::random_two_mode_state(d, cfg.seed ^ 0xF0CC, ctr);
                  const auto lhs = fock::apply_single_mode(s, op1, 0);
                  const auto full = numerics::kron(op1, numerics::ComplexMatrix::identity(d));
                  const auto want = full.apply(s.amps);
                  double worst = 0.0;
                  for (std::size_t k = 0; k < want.size(); ++k)
                      worst = std::max(worst, std::abs(lhs.amps[k] - want[k]));
                  const auto ab = fock::apply_single_mode(fock::apply_single_mode(s, op1, 0), op2, 1);
                  const auto ba = fock::apply_single_mode(fock::apply_single_mode(s, op2, 1), op1, 0);
                  for (std::size_t k = 0; k < ab.amps.size(); ++k)
                      worst = std::max(worst, std::abs(ab.amps[k] - ba.amps[k]));
                  r.measured = worst;
                  r.bound = 1e-12;
              });

    run_check(out, "I.fock.displacement", "matrix-exponential D agrees with the closed form",
              [&](CheckResult& r) {
                  const cplx beta(0.4, -0.3);
                  const int d = 32;
                  const auto de = fock::displacement(beta, d);
                  const auto da = fock::displacement_analytic(beta, d);
                  double worst = 0.0;
                  for (int i = 0; i < d; ++i)
                      for (int j = 0; j < d; ++j) worst = std::max(worst, std::abs(de(i, j) - da(i, j)));
                  r.measured = worst;
                  r.bound = 1e-10;
              });

    run_check(out, "I.states.norm_tail", "constructors at rule dims: unit norm, tail mass <= 1e-10",
              [&](CheckResult& r) {
                  const auto tail3 = [](const std::vector<cplx>& amps, int dim_per_mode,
                                        const std::vector<int>& dims) {
                      // weight on any mode index >= d-3
                      double t = 0.0;
                      for (std::size_t f = 0; f < amps.size(); ++f) {
                          std::size_t rem = f;
                          bool tail = false;
                          for (int m = int(dims.size()) - 1; m >= 0; --m) {
                              const int dm = dims[std::size_t(m)];
                              if (int(rem % std::size_t(dm)) >= dim_per_mode - 3) tail = true;
                              rem /= std::size_t(dm);
                          }
                          if (tail) t += std::norm(amps[f]);
                      }
                      return t;
                  };
                  double worst = 0.0;
                  const auto check_state = [&](const MultiModeState& s) {
                      worst = std::max(worst, std::abs(1.0 - fock::norm(s)) / 1e-10);
                      worst = std::max(worst, tail3(s.amps, s.mode_dims[0], s.mode_dims) / 1e-10);
                  };
                  check_state(fock::single_mode_state(states::coherent(2.0, 26)));
                  check_state(fock::single_mode_state(states::squeezed_vacuum(1.0, 96)));
                  check_state(states::two_mode_squeezed(std::tanh(1.0), 96));
                  check_state(states::circle_state(0.85, 24));
                  check_state(fock::single_mode_state(states::cat(2.0, states::Parity::Even, 40)));
                  check_state(fock::single_mode_state(states::generalized_cat(4, 1, 2.5, 40)));
                  check_state(states::n_mode_cat(2.0, 2, 30));
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "I.states.structure",
              "parity support, mod-K residue, Schmidt decay, number correlation", [&](CheckResult& r) {
                  double worst = 0.0;
                  const auto sq = states::squeezed_vacuum(1.0, 64);
                  for (int n = 1; n < 64; n += 2) worst = std::max(worst, std::abs(sq.amps[std::size_t(n)]));

                  const auto gc = states::generalized_cat(4, 1, 2.0, 32);
                  for (int n = 0; n < 32; ++n)
                      if (((n + 1) % 4) != 0)  // keep n = -nu = 3 (mod 4)
                          worst = std::max(worst, std::abs(gc.amps[std::size_t(n)]) / 10.0);

                  const double lam = std::tanh(1.0);
                  const auto tm = states::two_mode_squeezed(lam, 48);
                  for (int n = 0; n + 1 < 40; ++n) {
                      const cplx c0 = tm.amps[std::size_t(n) * 48 + std::size_t(n)];
                      const cplx c1 = tm.amps[std::size_t(n + 1) * 48 + std::size_t(n + 1)];
                      worst = std::max(worst, std::abs((c1 / c0).real() - lam) / 1e-3);
                  }

                  const auto circ = states::circle_state(0.85, 20);
                  const auto nn = fock::number_operator(20);
                  MultiModeState diff = fock::apply_single_mode(circ, nn, 0);
                  const auto d2 = fock::apply_single_mode(circ, nn, 1);
                  for (std::size_t k = 0; k < diff.amps.size(); ++k) diff.amps[k] -= d2.amps[k];
                  double m2 = 0.0;
                  for (const auto& a : diff.amps) m2 += std::norm(a);
                  const double m1 = fock::inner_product(circ, diff).real();
                  worst = std::max(worst, (m2 - m1 * m1) / 1e-12);

                  // <ab> = alpha from the c_{n+1}(n+1) = alpha c_n recurrence
                  const auto a = fock::annihilation(20);
                  const cplx ab = fock::expectation(circ, {{&a, 0}, {&a, 1}});
                  worst = std::max(worst, std::abs(ab - cplx(0.85, 0.0)) / 1e-8);
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "I.metrology.linearity", "S(2e)/S(e) = 2 and V(e) = V(0) for quadrature families",
              [&](CheckResult& r) {
                  double worst = 0.0;
                  std::vector<StateFamily> fams(4);
                  fams[0].tag = FamilyTag::Coherent;
                  fams[0].alpha = 1.0;
                  fams[1].tag = FamilyTag::SqueezedVacuum;
                  fams[1].r = 0.8;
                  fams[2].tag = FamilyTag::TwoModeSqueezed;
                  fams[2].r = 0.8;
                  fams[3].tag = FamilyTag::Circle;
                  fams[3].alpha = 0.85;
                  for (const auto& f : fams) {
                      const auto s0 = states::make_state(f, states::default_dim(f), cfg.memory_cap);
                      const auto [m0, v0] = metrology::quadrature_stats(s0);
                      const auto [m1, v1] = metrology::quadrature_stats(
                          metrology::apply_weak_force(s0, {0.1, std::nullopt, true}));
                      const auto [m2, v2] = metrology::quadrature_stats(
                          metrology::apply_weak_force(s0, {0.2, std::nullopt, true}));
                      worst = std::max(worst, std::abs((m2 - m0) / (m1 - m0) - 2.0) / 1e-8);
                      worst = std::max(worst, std::abs(v1 - v0) / 1e-8);
                      worst = std::max(worst, std::abs(v2 - v0) / 1e-8);
                  }
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "I.metrology.circle_oracle", "analytic eps_min matches numeric on the alpha grid",
              [&](CheckResult& r) {
                  double worst = 0.0;
                  for (double al : {0.0, 0.5, 0.85, 2.0, 4.0}) {
                      StateFamily f;
                      f.tag = FamilyTag::Circle;
                      f.alpha = al;
                      const auto rep = metrology::min_detectable_force(f, states::default_dim(f),
                                                                       cfg.memory_cap);
                      worst = std::max(worst, std::abs(rep.epsilon_min -
                                                       metrology::circle_epsilon_min_analytic(al)));
                  }
                  r.measured = worst;
                  r.bound = 2e-4;
              });

    run_check(out, "I.metrology.scaling_law",
              "entangled-cat bound gains 1/sqrt(N) over N copies at fixed n_tot", [&](CheckResult& r) {
                  const double ntot = 16.0;
                  double bound1 = 0.0, worst = 0.0;
                  for (int n = 1; n <= 4; ++n) {
                      const double al = std::sqrt(ntot / n);
                      const int dim = fock::recommended_dim(al);
                      const auto rep = metrology::cat_sensitivity_report(
                          al, n, dim, metrology::BoundConvention::PaperEqParameter, cfg.memory_cap);
                      if (n == 1) bound1 = rep.epsilon_min;
                      const double ratio = rep.epsilon_min / bound1;
                      worst = std::max(worst, std::abs(ratio * std::sqrt(double(n)) - 1.0) / 0.01);
                  }
                  r.measured = worst;
                  r.bound = 1.0;
              });

    run_check(out, "I.metrology.ghz_brute", "Var(sum Z) on GHZ equals N^2 exactly, N <= 10",
              [&](CheckResult& r) {
                  double worst = 0.0;
                  for (int n = 1; n <= 10; ++n) {
                      const double v = metrology::sum_z_variance(
                          metrology::ramsey_state(n, metrology::RamseyScheme::GHZ), n);
                      worst = std::max(worst, std::abs(v - double(n) * double(n)));
                  }
                  r.measured = worst;
                  r.bound = 1e-12;
              });

    run_check(out, "I.sampling.determinism", "identical (scheme, params, seed) gives identical shots",
              [&](CheckResult& r) {
                  const auto a = sampling::sample_parity_readout(0.3, 5000, cfg.seed);
                  const auto b = sampling::sample_parity_readout(0.3, 5000, cfg.seed);
                  r.measured = (a.outcomes == b.outcomes) ? 0.0 : 2.0;
                  r.bound = 1.0;
              });

    run_check(out, "I.sampling.chi_square",
              "homodyne samples match the grid distribution (chi-square, 0.001 level)",
              [&](CheckResult& r) {
                  const auto vac = states::coherent(0.0, 16);
                  const sampling::HomodyneGrid grid{};
                  const auto g = sampling::grid_distribution(vac, grid);
                  const std::uint64_t m = 100000;
                  const auto rec = sampling::sample_homodyne(vac, m, cfg.seed ^ 0xC512, grid);
                  const int nbins = 40;
                  // equal-probability bin edges from the exact grid CDF
                  std::vector<double> edges(std::size_t(nbins - 1));
                  const double total = g.cdf.back();
                  for (int b = 1; b < nbins; ++b) {
                      const double target = total * double(b) / nbins;
                      const auto it = std::lower_bound(g.cdf.begin(), g.cdf.end(), target);
                      edges[std::size_t(b - 1)] = g.y[std::size_t(it - g.cdf.begin())];
                  }
                  std::vector<double> counts(std::size_t(nbins), 0.0);
                  for (double y : rec.outcomes) {
                      const auto it = std::upper_bound(edges.begin(), edges.end(), y);
                      counts[std::size_t(it - edges.begin())] += 1.0;
                  }
                  // expected mass per bin from the same CDF at the chosen edges
                  std::vector<double> expected(std::size_t(nbins), 0.0);
                  const auto cdf_at = [&](double y) {
                      const auto it = std::lower_bound(g.y.begin(), g.y.end(), y);
                      return g.cdf[std::size_t(it - g.y.begin())];
                  };
                  double prev = 0.0;
                  for (int b = 0; b < nbins; ++b) {
                      const double hi = (b == nbins - 1) ? total : cdf_at(edges[std::size_t(b)]);
                      expected[std::size_t(b)] = (hi - prev) / total * double(m);
                      prev = hi;
                  }
                  double chi2 = 0.0;
                  for (int b = 0; b < nbins; ++b)
                      chi2 += (counts[std::size_t(b)] - expected[std::size_t(b)]) *
                              (counts[std::size_t(b)] - expected[std::size_t(b)]) /
                              expected[std::size_t(b)];
                  r.measured = chi2;
                  r.bound = 72.0546629519878;  // chi-square 0.999 quantile, 39 dof
              });

    run_check(out, "I.sampling.estimator",
              "theta_hat bias within 2 SE; shot-noise std slope -1/2 in log-log", [&](CheckResult& r) {
                  double worst = 0.0;
                  {
                      const int reps = 200;
                      const std::uint64_t m = 10000;
                      double mean = 0.0;
                      std::vector<double> hats(reps);
                      for (int k = 0; k < reps; ++k) {
                          const std::uint64_t s = numerics::counter_rng(cfg.seed, 5000 + std::uint64_t(k));
                          hats[std::size_t(k)] = sampling::estimate_theta(
                                                     sampling::sample_parity_readout(0.3, m, s))
                                                     .theta_hat;
                          mean += hats[std::size_t(k)];
                      }
                      mean /= reps;
                      double var = 0.0;
                      for (double h : hats) var += (h - mean) * (h - mean);
                      var /= (reps - 1);
                      const double se_mean = std::sqrt(var / reps);
                      worst = std::max(worst, std::abs(mean - 0.3) / (2.0 * se_mean));
                  }
                  {
                      std::vector<double> ms{100.0, 1000.0, 10000.0}, stds;
                      for (double mv : ms) {
                          const int reps = 300;
                          std::vector<double> hats(reps);
                          double mean = 0.0;
                          for (int k = 0; k < reps; ++k) {
                              const std::uint64_t s = numerics::counter_rng(
                                  cfg.seed, 9000 + std::uint64_t(mv) * 400 + std::uint64_t(k));
                              hats[std::size_t(k)] =
                                  sampling::estimate_theta(
                                      sampling::sample_parity_readout(0.3, std::uint64_t(mv), s))
                                      .theta_hat;
                              mean += hats[std::size_t(k)];
                          }
                          mean /= reps;
                          double var = 0.0;
                          for (double h : hats) var += (h - mean) * (h - mean);
                          stds.push_back(std::sqrt(var / (reps - 1)));
                      }
                      const double slope = detail::loglog_slope(ms, stds);
                      worst = std::max(worst, std::abs(slope + 0.5) / 0.05);
                  }
                  r.measured = worst;
                  r.bound = 1.0;
              });
}

inline std::vector<CheckResult> run_all_checks(const io::RunConfig& cfg) {
    std::vector<CheckResult> out;
    acceptance_checks(out, cfg);
    invariant_checks(out, cfg);
    return out;
}

inline io::ordered_json verify_json(const io::RunConfig& cfg, const std::vector<CheckResult>& checks) {
    io::ordered_json j;
    j["seed"] = cfg.seed;
    if (cfg.dim) j["dim"] = *cfg.dim;
    else j["dim"] = nullptr;
    j["tol"] = cfg.tol;
    io::ordered_json arr = io::ordered_json::array();
    bool all = true;
    io::ordered_json failed = io::ordered_json::array();
    for (const auto& c : checks) {
        io::ordered_json e;
        e["id"] = c.id;
        e["description"] = c.description;
        e["pass"] = c.pass;
        e["measured"] = io::fmt_g9(c.measured);
        e["bound"] = io::fmt_g9(c.bound);
        if (!c.note.empty()) e["note"] = c.note;
        arr.push_back(std::move(e));
        if (!c.pass) {
            all = false;
            failed.push_back(c.id);
        }
    }
    j["checks"] = std::move(arr);
    j["all_pass"] = all;
    j["failed"] = std::move(failed);
    return j;
}

}  // namespace fockforce::verify
