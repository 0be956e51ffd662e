#pragma once

// Closed-form rate, gap and error-bound machinery.
//
// Conventions: a RateBound's `gap` is the P-independent penalty, i.e. the
// second logarithm in
//   R < log2(P') - gap           (complex models)
//   R < (1/2) log2(P') - gap     (real models)
// where P' = P for AWGN and P e^{-γ} for Rayleigh fading.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nflab/channel.hpp"
#include "nflab/lattice.hpp"
#include "nflab/specfun.hpp"

namespace nflab {

namespace constants {
inline constexpr double martinet_g = 92.368;    // totally complex tower, |d|^{1/n} = G^2
inline constexpr double martinet_g1 = 1058.0;   // totally real tower, |d|^{1/n} = G1
inline constexpr double hajir_maire_g = 82.2;
inline constexpr double hajir_maire_g1 = 954.3;
inline constexpr double odlyzko_root_disc = 60.8;  // totally real, m -> ∞
inline constexpr double zimmert_real = 50.7;
inline constexpr double zimmert_complex = 19.9;
inline constexpr double ideal_decay_complex = 3.1;  // Nd(I) <= 3.1^{-n}
inline constexpr double ideal_decay_real = 7.12;    // Nd(I) <= 7.12^{-n}
}  // namespace constants

struct RateBound {
  std::string label;
  ChannelModel channel = ChannelModel::awgn_complex;
  double power = 1.0;
  double rate = 0.0;
  double gap = 0.0;
  std::vector<std::pair<std::string, double>> parameters;
};

inline double pi_e() { return std::numbers::pi * std::numbers::e; }

/// P{||w||² >= (d/2)²} under the model's noise convention.
inline double sphere_bound(double min_distance, int n, ChannelModel model) {
  if (!(min_distance > 0.0)) throw DomainError("sphere_bound: distance must be positive");
  const double radius_sq = 0.25 * min_distance * min_distance;
  // Complex: 2||w||² ~ χ²(2n). Real: ||w||² ~ χ²(n).
  return is_complex(model) ? chi_square_tail(2 * n, 2.0 * radius_sq) : chi_square_tail(n, radius_sq);
}

/// log2 of the effective SNR term: P for AWGN, P e^{-γ} for fading, halved for real models.
inline double reference_term(ChannelModel model, double power) {
  double t = std::log2(power);
  if (is_fading(model)) t -= kEulerGamma * std::numbers::log2e;
  return is_complex(model) ? t : 0.5 * t;
}

/// log2(1+P) (complex AWGN), log2(1+P e^{-γ}) (complex fading lower bound),
/// halved for the real models.
inline double capacity_reference(ChannelModel model, double power) {
  const double snr = is_fading(model) ? power * std::exp(-kEulerGamma) : power;
  const double c = std::log2(1.0 + snr);
  return is_complex(model) ? c : 0.5 * c;
}

/// Gap for a root-discriminant-type constant: log2(2G/(πe)) complex, (1/2)log2(2G1/(πe)) real.
inline double constant_gap(ChannelModel model, double constant) {
  const double g = std::log2(2.0 * constant / pi_e());
  return is_complex(model) ? g : 0.5 * g;
}

/// Achievable rate of the number-field construction for the given constant
/// (G for complex models, G1 for real models). Negative rates are returned as is.
inline RateBound achievable_rate(ChannelModel model, double power, double constant, std::string label = {}) {
  if (!(power > 0.0) || !(constant > 0.0)) throw DomainError("achievable_rate: P and constant must be positive");
  RateBound rb;
  rb.label = label.empty() ? to_string(model) : std::move(label);
  rb.channel = model;
  rb.power = power;
  rb.gap = constant_gap(model, constant);
  rb.rate = reference_term(model, power) - rb.gap;
  rb.parameters = {{"P", power}, {is_complex(model) ? "G" : "G1", constant}};
  if (is_fading(model)) rb.parameters.emplace_back("gamma", kEulerGamma);
  return rb;
}

/// Gap driven by the lattice's own invariants: Nsv for AWGN, Nd_p,min for fading.
///   real:    (1/2)log2(2n/(Nsv² πe)),   (1/2)log2(2/(πe Nd^{2/n}))
///   complex: log2(4n/(Nsv² πe)),        log2(4/(πe Nd^{2/n}))
inline RateBound gap_from_lattice(const LatticeInvariants& inv, int n, ChannelModel model, double power,
                                  std::string label = {}) {
  RateBound rb;
  rb.label = label.empty() ? "lattice_" + to_string(model) : std::move(label);
  rb.channel = model;
  rb.power = power;
  const double scale = is_complex(model) ? 2.0 : 1.0;  // complex forms double the numerator
  if (is_fading(model)) {
    if (!inv.ndp) throw ValidationError("gap_from_lattice: normalized product distance unknown");
    const double nd_pow = std::pow(*inv.ndp, 2.0 / n);
    rb.gap = std::log2(2.0 * scale / (pi_e() * nd_pow));
    rb.parameters = {{"P", power}, {"ndp", *inv.ndp}, {"n", n}, {"gamma", kEulerGamma}};
  } else {
    rb.gap = std::log2(2.0 * scale * n / (inv.nsv * inv.nsv * pi_e()));
    rb.parameters = {{"P", power}, {"nsv", inv.nsv}, {"n", n}};
  }
  if (!is_complex(model)) rb.gap *= 0.5;
  rb.rate = reference_term(model, power) - rb.gap;
  return rb;
}

/// Asymptotic gap constants: Martinet and Hajir–Maire towers, the Odlyzko and
/// Minkowski limits and the ideal-lattice ceilings, evaluated at power P.
inline std::vector<RateBound> bound_table(double power = 100.0) {
  using namespace constants;
  std::vector<RateBound> rows;
  const ChannelModel models[] = {ChannelModel::awgn_complex, ChannelModel::rayleigh_complex, ChannelModel::awgn_real,
                                 ChannelModel::rayleigh_real};
  for (auto m : models)
    rows.push_back(achievable_rate(m, power, is_complex(m) ? martinet_g : martinet_g1, "martinet_" + to_string(m)));
  for (auto m : models)
    rows.push_back(
        achievable_rate(m, power, is_complex(m) ? hajir_maire_g : hajir_maire_g1, "hajir_maire_" + to_string(m)));

  RateBound odlyzko = achievable_rate(ChannelModel::rayleigh_real, power, odlyzko_root_disc, "odlyzko_limit_rayleigh_real");
  odlyzko.parameters = {{"P", power}, {"root_disc", odlyzko_root_disc}, {"gamma", kEulerGamma}};
  rows.push_back(odlyzko);

  // Nd <= n!/n^n, so Nd^{2/n} -> e^{-2} as n -> ∞.
  RateBound minkowski;
  minkowski.label = "minkowski_limit_rayleigh_real";
  minkowski.channel = ChannelModel::rayleigh_real;
  minkowski.power = power;
  minkowski.gap = 0.5 * std::log2(2.0 * std::numbers::e / std::numbers::pi);
  minkowski.rate = reference_term(minkowski.channel, power) - minkowski.gap;
  minkowski.parameters = {{"P", power}, {"nd_root_limit", std::exp(-2.0)}, {"gamma", kEulerGamma}};
  rows.push_back(minkowski);

  // Ideal lattices of large fields: Nd^{2/n} <= base^{-2}.
  auto ceiling = [&](ChannelModel m, double base, double zimmert, const char* label) {
    RateBound rb;
    rb.label = label;
    rb.channel = m;
    rb.power = power;
    rb.gap = is_complex(m) ? std::log2(4.0 * base * base / pi_e()) : 0.5 * std::log2(2.0 * base * base / pi_e());
    rb.rate = reference_term(m, power) - rb.gap;
    rb.parameters = {{"P", power}, {"nd_decay_base", base}, {"zimmert", zimmert}, {"gamma", kEulerGamma}};
    return rb;
  };
  rows.push_back(ceiling(ChannelModel::rayleigh_complex, ideal_decay_complex, zimmert_complex,
                         "zimmert_ideal_ceiling_rayleigh_complex"));
  rows.push_back(
      ceiling(ChannelModel::rayleigh_real, ideal_decay_real, zimmert_real, "zimmert_ideal_ceiling_rayleigh_real"));
  return rows;
}

struct FadingErrorBound {
  double bound = 1.0;  // saturated at 1
  double delta = 0.0;
  double epsilon = 0.0;
  double noise_term = 1.0;   // P{||w||²/n >= 1+ε}
  double fading_term = 1.0;  // e^{n·exponent(δ)}
  bool active = false;       // precondition α²/4 e^{-(δ+γ)} >= 1+ε held
};

namespace detail {

inline FadingErrorBound fading_bound_at(int n, double alpha, std::optional<double> delta, double epsilon,
                                        ChannelModel model) {
  FadingErrorBound b;
  b.epsilon = epsilon;
  // Complex: ||w||²/n ~ χ²(2n)/(2n). Real: χ²(n)/n, same derivation with dof n.
  const double rate = is_complex(model) ? 8.0 : 16.0;
  b.noise_term = 2.0 * std::exp(-n * epsilon * epsilon / rate);
  const double a = 0.25 * alpha * alpha;
  const double max_delta = std::log(a / (1.0 + epsilon)) - kEulerGamma;
  b.delta = delta.value_or(max_delta);
  if (!(b.delta > 0.0) || b.delta > max_delta * (1.0 + 1e-12) + 1e-300) {
    b.bound = 1.0;
    return b;
  }
  b.active = true;
  b.fading_term = std::exp(n * chernoff_solve(b.delta).exponent);
  b.bound = std::min(1.0, b.noise_term + b.fading_term);
  return b;
}

}  // namespace detail

/// P_e <= P{||w||²/n >= 1+ε} + P{(α²/4) V_n < 1+ε}
///     <= 2e^{-nε²/8} + e^{n(v_δ ψ(1-v_δ) + lnΓ(1-v_δ))}   (complex; real uses nε²/16).
/// Empty delta selects the largest δ meeting the precondition; empty epsilon
/// minimizes over a 100-point log grid ε ∈ [1e-3, 1e2].
inline FadingErrorBound fading_error_bound(int n, double alpha, std::optional<double> delta,
                                           std::optional<double> epsilon, ChannelModel model) {
  if (epsilon) return detail::fading_bound_at(n, alpha, delta, *epsilon, model);
  FadingErrorBound best;
  constexpr int grid = 100;
  for (int i = 0; i < grid; ++i) {
    const double eps = std::pow(10.0, -3.0 + 5.0 * i / (grid - 1));
    const FadingErrorBound b = detail::fading_bound_at(n, alpha, delta, eps, model);
    if (i == 0 || b.bound < best.bound) best = b;
  }
  return best;
}

}  // namespace nflab
