#pragma once

// Finite power-constrained codes C = B(√(nP)) ∩ (x_R + α ψ(O_K)).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nflab/errors.hpp"
#include "nflab/lattice.hpp"
#include "nflab/numberfield.hpp"
#include "nflab/rng.hpp"
#include "nflab/specfun.hpp"

namespace nflab {

struct CodeConfig {
  double rate = 1.0;   // R
  double power = 1.0;  // P
  const FieldSpec* field = nullptr;
  std::uint64_t seed = 0;
};

struct Codebook {
  LatticeBasis lattice;  // α ψ(O_K)
  std::vector<Eigen::VectorXd> points;
  std::vector<Coords> coords;  // integer coordinates of points[i] - shift in `lattice`
  double alpha = 0.0;
  Eigen::VectorXd shift;
  double rate = 0.0;           // requested R
  double achieved_rate = 0.0;  // log2|C| / n
  double power = 0.0;
  int n = 0;

  std::size_t size() const { return points.size(); }

  /// Index of the codeword with these lattice coordinates, if any.
  std::optional<std::size_t> find(const Coords& c) const {
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void build_index() {
    index_.clear();
    for (std::size_t i = 0; i < coords.size(); ++i) index_[coords[i]] = i;
  }

 private:
  std::map<Coords, std::size_t> index_;
};

inline constexpr std::size_t kMaxCodebookSize = std::size_t{1} << 20;
inline constexpr std::size_t kShiftRetryCap = 10000;

/// ln C_n with C_n = (πn)^n / n!.
inline double ln_ball_constant_complex(int n) {
  return n * std::log(std::numbers::pi * n) - ln_gamma(n + 1.0);
}

/// ln C_n^R with C_n^R = (πn)^{n/2} / Γ(n/2 + 1).
inline double ln_ball_constant_real(int n) {
  return 0.5 * n * std::log(std::numbers::pi * n) - ln_gamma(0.5 * n + 1.0);
}

/// Volume of the real-dimension-d Euclidean ball of the given radius.
inline double ball_volume(int real_dim, double radius) {
  const double d = real_dim;
  return std::exp(0.5 * d * std::log(std::numbers::pi) - ln_gamma(0.5 * d + 1.0) + d * std::log(radius));
}

/// α² making |B(√(nP))| / Vol(α ψ(O_K)) = 2^{Rn}:
///   complex degree 2n: 2P C_n^{1/n} / (2^R |d_K|^{1/2n})
///   real degree n:     P (C_n^R)^{2/n} / (2^{2R} |d_K|^{1/n})
inline double energy_normalization(const FieldSpec& field, double rate, double power) {
  if (field.r1 > 0 && field.r2 > 0) throw ValidationError("energy_normalization: mixed-signature field");
  const int n = field.n();
  const double ln_d = std::log(static_cast<double>(field.abs_disc()));
  if (field.totally_real()) {
    return power * std::exp(2.0 / n * ln_ball_constant_real(n) - 2.0 * rate * std::numbers::ln2 - ln_d / n);
  }
  return 2.0 * power * std::exp(ln_ball_constant_complex(n) / n - rate * std::numbers::ln2 - ln_d / (2.0 * n));
}

struct ShiftResult {
  Eigen::VectorXd shift;
  std::size_t count = 0;
  double ratio = 0.0;  // Vol(B) / Vol(L)
  std::size_t samples = 0;
};

/// Samples shifts uniformly from the fundamental parallelotope until
/// |(L + x) ∩ B(√(nP))| >= max(target_count, Vol(B)/Vol(L)).
inline ShiftResult shift_search(const LatticeBasis& basis, double power, std::size_t target_count,
                                std::uint64_t seed, const EnumerationConfig& cfg = {}) {
  const double radius = std::sqrt(basis.n * power);
  const double ratio = ball_volume(basis.dim(), radius) / volume(basis);
  if (static_cast<double>(target_count) > 2.0 * ratio)
    throw InfeasibleRateError("shift_search: target " + std::to_string(target_count) + " exceeds twice Vol(B)/Vol(L) = " +
                              std::to_string(2.0 * ratio));
  const auto required =
      std::max<std::size_t>(target_count, static_cast<std::size_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio))));

  ShiftResult best;
  best.ratio = ratio;
  for (std::size_t sample = 0; sample < kShiftRetryCap; ++sample) {
    CounterRng rng(seed, sample, Stream::shift);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(basis.dim());
    for (int i = 0; i < basis.rank(); ++i) x += rng.uniform() * basis.vectors.row(i).transpose();
    const std::size_t count = count_in_ball(basis, -x, radius, cfg);
    if (sample == 0 || count > best.count) {
      best.shift = x;
      best.count = count;
    }
    best.samples = sample + 1;
    if (best.count >= required) return best;
  }
  throw RetryCapError("shift_search: no shift reached " + std::to_string(required) + " points in " +
                          std::to_string(kShiftRetryCap) + " samples (best " + std::to_string(best.count) + ")",
                      best.count);
}

/// Target codebook size ⌈2^{Rn}⌉ with n the coordinate count.
inline std::size_t target_size(double rate, int n) {
  const double t = std::exp2(rate * n);
  if (!(t < static_cast<double>(kMaxCodebookSize)))
    throw InfeasibleRateError("rate infeasible at this dimension: 2^{Rn} = " + std::to_string(t) + " exceeds the codebook cap");
  return static_cast<std::size_t>(std::ceil(t - 1e-9 * t));
}

inline Codebook carve(const CodeConfig& config, const EnumerationConfig& cfg = {}) {
  if (!config.field) throw ValidationError("carve: no field");
  if (!(config.rate > 0.0) || !(config.power > 0.0)) throw ValidationError("carve: rate and power must be positive");
  const FieldSpec& field = *config.field;
  const double alpha = std::sqrt(energy_normalization(field, config.rate, config.power));
  const LatticeBasis lattice = embedding_matrix(field).scaled(alpha);
  const std::size_t target = target_size(config.rate, field.n());
  const ShiftResult sr = shift_search(lattice, config.power, target, config.seed, cfg);

  Codebook cb;
  cb.lattice = lattice;
  cb.alpha = alpha;
  cb.shift = sr.shift;
  cb.rate = config.rate;
  cb.power = config.power;
  cb.n = field.n();
  const double radius = std::sqrt(field.n() * config.power);
  for (auto& p : points_in_ball(lattice, -sr.shift, radius, cfg)) {
    cb.points.push_back(p.vector + sr.shift);
    cb.coords.push_back(std::move(p.coords));
  }
  cb.achieved_rate = std::log2(static_cast<double>(cb.size())) / cb.n;
  cb.build_index();
  return cb;
}

/// CSV export: '#' header lines with alpha, shift, rate and power, then
/// `index,coord_0,...` (complex coordinates as re/im pairs).
inline void write_codebook_csv(const Codebook& cb, std::ostream& out) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "# alpha=" << num(cb.alpha) << "\n# shift=";
  for (Eigen::Index i = 0; i < cb.shift.size(); ++i) out << (i ? ";" : "") << num(cb.shift[i]);
  out << "\n# rate=" << num(cb.rate) << "\n# achieved_rate=" << num(cb.achieved_rate) << "\n# power=" << num(cb.power)
      << "\n# n=" << cb.n << "\n# ambient=" << (cb.lattice.is_complex() ? "complex" : "real") << "\nindex";
  for (int j = 0; j < cb.lattice.dim(); ++j) out << ",coord_" << j;
  out << '\n';
  for (std::size_t i = 0; i < cb.size(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < cb.points[i].size(); ++j) out << ',' << num(cb.points[i][j]);
    out << '\n';
  }
}

}  // namespace nflab
