#pragma once

// Coherent decoders: naive lattice decoding (closest point of the whole
// shifted lattice x_R + αψ(O_K)) and ML decoding over the finite codebook.
// Fading is folded into the lattice basis, never divided out.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

#include "nflab/channel.hpp"
#include "nflab/codebook.hpp"
#include "nflab/lattice.hpp"

namespace nflab {

struct DecodeOutcome {
  Eigen::VectorXd decoded;
  Coords coords;  // lattice coordinates of decoded - shift
  std::optional<std::size_t> index;
  bool is_codeword = false;
  bool correct = false;
  double metric = 0.0;  // ||y - fading ⊙ decoded||²
};

/// The codebook lattice with every basis vector multiplied by the fading.
inline LatticeBasis faded_lattice(const Codebook& cb, const ChannelRealization& r) {
  LatticeBasis faded = cb.lattice;
  for (int i = 0; i < faded.rank(); ++i)
    faded.vectors.row(i) = apply_fading(r.fading, cb.lattice.is_complex(), cb.lattice.vectors.row(i).transpose()).transpose();
  return faded;
}

inline DecodeOutcome nld_decode(const Eigen::VectorXd& y, const ChannelRealization& r, const Codebook& cb,
                                std::size_t transmitted, const EnumerationConfig& cfg = {}) {
  const bool cplx = cb.lattice.is_complex();
  const LatticeBasis faded = faded_lattice(cb, r);
  const Eigen::VectorXd target = y - apply_fading(r.fading, cplx, cb.shift);
  LatticePoint p = closest_vector(faded, target, cfg);

  DecodeOutcome out;
  out.decoded = cb.shift + cb.lattice.point(p.coords);
  out.metric = p.norm * p.norm;
  out.index = cb.find(p.coords);
  out.is_codeword = out.index.has_value();
  out.correct = out.is_codeword && *out.index == transmitted;
  out.coords = std::move(p.coords);
  return out;
}

/// Exhaustive scan; ties go to the lowest codebook index.
inline DecodeOutcome ml_decode(const Eigen::VectorXd& y, const ChannelRealization& r, const Codebook& cb,
                               std::size_t transmitted) {
  const bool cplx = cb.lattice.is_complex();
  std::size_t best = 0;
  double best_metric = 0.0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double m = (y - apply_fading(r.fading, cplx, cb.points[i])).squaredNorm();
    if (i == 0 || m < best_metric) {
      best = i;
      best_metric = m;
    }
  }
  DecodeOutcome out;
  out.decoded = cb.points[best];
  out.coords = cb.coords[best];
  out.index = best;
  out.is_codeword = true;
  out.correct = best == transmitted;
  out.metric = best_metric;
  return out;
}

}  // namespace nflab
