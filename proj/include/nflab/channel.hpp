#pragma once

// Seeded channel simulators: real/complex AWGN and real/complex fast Rayleigh
// fading. Noise variance is 1/2 per real dimension for complex models and 1
// for real models; complex fading h_i has variance 1/2 per real dimension and
// real fading is g_i = |h_i|. With these conventions the SNR equals P.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nflab/errors.hpp"
#include "nflab/rng.hpp"

namespace nflab {

enum class ChannelModel { awgn_real, awgn_complex, rayleigh_real, rayleigh_complex };

inline bool is_complex(ChannelModel m) { return m == ChannelModel::awgn_complex || m == ChannelModel::rayleigh_complex; }
inline bool is_fading(ChannelModel m) { return m == ChannelModel::rayleigh_real || m == ChannelModel::rayleigh_complex; }

inline std::string to_string(ChannelModel m) {
  switch (m) {
    case ChannelModel::awgn_real: return "awgn_real";
    case ChannelModel::awgn_complex: return "awgn_complex";
    case ChannelModel::rayleigh_real: return "rayleigh_real";
    case ChannelModel::rayleigh_complex: return "rayleigh_complex";
  }
  return "?";
}

inline ChannelModel parse_channel_model(const std::string& s) {
  for (auto m : {ChannelModel::awgn_real, ChannelModel::awgn_complex, ChannelModel::rayleigh_real,
                 ChannelModel::rayleigh_complex})
    if (to_string(m) == s) return m;
  throw ValidationError("unknown channel model '" + s + "'");
}

struct ChannelRealization {
  std::vector<std::complex<double>> fading;  // per symbol; imaginary part 0 for real models
  Eigen::VectorXd noise;                     // real representation, same layout as the codeword
  ChannelModel model = ChannelModel::awgn_real;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;

  std::size_t symbols() const { return fading.size(); }
};

struct TransmitOptions {
  double noise_scale = 1.0;  // 0 disables noise (test hook)
};

/// fading ⊙ v, with complex coordinates stored as interleaved (re, im) pairs.
inline Eigen::VectorXd apply_fading(const std::vector<std::complex<double>>& fading, bool complex_layout,
                                    const Eigen::VectorXd& v) {
  Eigen::VectorXd out(v.size());
  if (complex_layout) {
    for (std::size_t i = 0; i < fading.size(); ++i) {
      const std::complex<double> z = fading[i] * std::complex<double>(v[2 * i], v[2 * i + 1]);
      out[2 * i] = z.real();
      out[2 * i + 1] = z.imag();
    }
  } else {
    for (std::size_t i = 0; i < fading.size(); ++i) out[i] = fading[i].real() * v[i];
  }
  return out;
}

/// Draws the realization for (master_seed, trial_index) without a codeword.
inline ChannelRealization draw_realization(std::size_t symbols, ChannelModel model, std::uint64_t master_seed,
                                           std::uint64_t trial_index, TransmitOptions opts = {}) {
  ChannelRealization r;
  r.model = model;
  r.master_seed = master_seed;
  r.trial_index = trial_index;
  r.fading.assign(symbols, {1.0, 0.0});
  if (is_fading(model)) {
    CounterRng rng(master_seed, trial_index, Stream::fading);
    const double sd = std::sqrt(0.5);
    for (auto& h : r.fading) {
      const double re = sd * rng.normal();
      const double im = sd * rng.normal();
      h = model == ChannelModel::rayleigh_complex ? std::complex<double>(re, im)
                                                  : std::complex<double>(std::hypot(re, im), 0.0);
    }
  }
  const bool cplx = is_complex(model);
  r.noise.resize(static_cast<Eigen::Index>(cplx ? 2 * symbols : symbols));
  CounterRng rng(master_seed, trial_index, Stream::noise);
  const double sd = (cplx ? std::sqrt(0.5) : 1.0) * opts.noise_scale;
  for (Eigen::Index i = 0; i < r.noise.size(); ++i) r.noise[i] = sd * rng.normal();
  return r;
}

/// y = fading ⊙ s + w for the seeded trial.
inline std::pair<Eigen::VectorXd, ChannelRealization> transmit(const Eigen::VectorXd& s, ChannelModel model,
                                                               std::uint64_t master_seed, std::uint64_t trial_index,
                                                               TransmitOptions opts = {}) {
  const bool cplx = is_complex(model);
  if (cplx && s.size() % 2 != 0)
    throw ValidationError("transmit: complex model needs an even-length real representation");
  const std::size_t symbols = static_cast<std::size_t>(cplx ? s.size() / 2 : s.size());
  ChannelRealization r = draw_realization(symbols, model, master_seed, trial_index, opts);
  Eigen::VectorXd y = apply_fading(r.fading, cplx, s) + r.noise;
  return {std::move(y), std::move(r)};
}

/// V_n = (∏ X_i)^{1/n} with X_i = |h_i|² (or g_i²).
inline double geometric_mean_statistic(const ChannelRealization& r) {
  double log_sum = 0.0;
  for (const auto& h : r.fading) log_sum += std::log(std::norm(h));
  return std::exp(log_sum / static_cast<double>(r.fading.size()));
}

}  // namespace nflab
