#pragma once

// Special functions used by the error-bound machinery: lnΓ, ψ, the χ² upper
// tail and the Chernoff-parameter solver for the geometric mean of Exp(1)
// variables. Everything here is pure.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nflab/errors.hpp"

namespace nflab {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

namespace detail {

// Below this argument both lnΓ and ψ are shifted upward by recurrence before
// the asymptotic series is applied.
inline constexpr double kAsymptoticCutoff = 10.0;

inline double ln_gamma_asymptotic(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Stirling series, Bernoulli terms through B_14.
  const double series =
      inv * (1.0 / 12.0 +
             inv2 * (-1.0 / 360.0 +
                     inv2 * (1.0 / 1260.0 +
                             inv2 * (-1.0 / 1680.0 +
                                     inv2 * (1.0 / 1188.0 +
                                             inv2 * (-691.0 / 360360.0 + inv2 * (1.0 / 156.0)))))));
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

inline double digamma_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 * (1.0 / 12.0)))))));
  return std::log(x) - 0.5 / x - series;
}

}  // namespace detail

/// ln Γ(x) for x > 0.
inline double ln_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("ln_gamma: argument must be positive, got " + std::to_string(x));
  if (x >= detail::kAsymptoticCutoff) return detail::ln_gamma_asymptotic(x);
  double product = 1.0;
  double shifted = x;
  while (shifted < detail::kAsymptoticCutoff) {
    product *= shifted;
    shifted += 1.0;
  }
  return detail::ln_gamma_asymptotic(shifted) - std::log(product);
}

/// ψ(x) = d/dx ln Γ(x) for x > 0.
inline double digamma(double x) {
  if (!(x > 0.0)) throw DomainError("digamma: argument must be positive, got " + std::to_string(x));
  double correction = 0.0;
  while (x < detail::kAsymptoticCutoff) {
    correction += 1.0 / x;
    x += 1.0;
  }
  return detail::digamma_asymptotic(x) - correction;
}

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw DomainError("regularized_gamma_q: shape must be positive");
  if (x < 0.0) throw DomainError("regularized_gamma_q: argument must be nonnegative");
  if (x == 0.0) return 1.0;
  constexpr double eps = 1e-16;
  constexpr int max_iter = 10000;
  const double log_prefactor = -x + a * std::log(x) - ln_gamma(a);

  if (x < a + 1.0) {
    // Series for P(a, x); Q is not small in this region so 1 - P is safe.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < max_iter; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * eps) break;
    }
    return 1.0 - sum * std::exp(log_prefactor);
  }

  // Modified Lentz continued fraction for Q(a, x).
  constexpr double tiny = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < max_iter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return std::exp(log_prefactor) * h;
}

/// P{Z >= threshold} for Z ~ χ²(dof).
inline double chi_square_tail(unsigned dof, double threshold) {
  if (dof == 0) throw DomainError("chi_square_tail: dof must be at least 1");
  if (threshold < 0.0) throw DomainError("chi_square_tail: threshold must be nonnegative");
  return regularized_gamma_q(0.5 * dof, 0.5 * threshold);
}

struct ChernoffSolution {
  double delta;
  double v_delta;   // in (0, 1)
  double exponent;  // v ψ(1 - v) + lnΓ(1 - v), always <= 0
};

/// Solves ψ(1 - v) = -(δ + γ) for the optimal Chernoff parameter of
/// P{(1/n) Σ ln X_i <= -(δ + γ)}, X_i ~ Exp(1).
inline ChernoffSolution chernoff_solve(double delta) {
  if (!(delta > 0.0)) throw DomainError("chernoff_solve: delta must be positive");
  const double target = -(delta + kEulerGamma);
  auto residual = [&](double v) { return digamma(1.0 - v) - target; };

  // residual is strictly decreasing in v: positive at lo, negative at hi.
  double lo = 1e-12;
  double hi = 1.0 - 1e-9;
  if (residual(hi) > 0.0)
    throw ConvergenceError("chernoff_solve: delta too large to bracket the root");

  constexpr double v_tol = 1e-12;
  constexpr double residual_tol = 1e-9;
  constexpr int max_iter = 400;
  double v = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    v = 0.5 * (lo + hi);
    const double r = residual(v);
    if (r > 0.0)
      lo = v;
    else
      hi = v;
    if (hi - lo < v_tol && std::abs(r) <= residual_tol) break;
    if (hi <= std::nextafter(lo, 1.0)) break;
  }
  const double r = residual(v);
  if (std::abs(r) > residual_tol)
    throw ConvergenceError("chernoff_solve: residual " + std::to_string(r) + " above tolerance");
  return {delta, v, v * digamma(1.0 - v) + ln_gamma(1.0 - v)};
}

}  // namespace nflab
