#pragma once

// Full-rank lattices in R^n or C^n, LLL preprocessing and exact enumeration
// (shortest vector, closest vector, ball listing, minimum product distance).
//
// Complex ambient space C^n is stored as R^{2n} with coordinates interleaved
// (re_0, im_0, re_1, im_1, ...). Only the product norm reads the pairs back as
// complex moduli; all Euclidean geometry runs on the real representation.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nflab/errors.hpp"

namespace nflab {

enum class Ambient { real, complex };

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using Coords = std::vector<long long>;

struct LatticeBasis {
  Ambient ambient = Ambient::real;
  int n = 0;                // coordinate count over R or C
  Eigen::MatrixXd vectors;  // one basis vector per row, real representation

  static LatticeBasis real(Eigen::MatrixXd rows) {
    LatticeBasis b{Ambient::real, static_cast<int>(rows.cols()), std::move(rows)};
    b.validate();
    return b;
  }
  static LatticeBasis complex(Eigen::MatrixXd rows) {
    if (rows.cols() % 2 != 0) throw ValidationError("complex lattice needs an even real dimension");
    LatticeBasis b{Ambient::complex, static_cast<int>(rows.cols() / 2), std::move(rows)};
    b.validate();
    return b;
  }

  bool is_complex() const { return ambient == Ambient::complex; }
  int dim() const { return is_complex() ? 2 * n : n; }
  int rank() const { return static_cast<int>(vectors.rows()); }

  LatticeBasis scaled(double c) const { return {ambient, n, vectors * c}; }

  Eigen::MatrixXd gram() const { return vectors * vectors.transpose(); }

  /// Lattice vector with the given integer coordinates.
  Eigen::VectorXd point(const Coords& c) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim());
    for (int i = 0; i < rank(); ++i) v += static_cast<double>(c[i]) * vectors.row(i).transpose();
    return v;
  }

  void validate() const {
    if (rank() != dim() || vectors.cols() != dim())
      throw ValidationError("lattice basis must be full rank: rank " + std::to_string(rank()) +
                            " in real dimension " + std::to_string(vectors.cols()));
    Eigen::LLT<Eigen::MatrixXd> llt(gram());
    if (llt.info() != Eigen::Success) throw ValidationError("Gram matrix is not positive definite");
  }
};

struct EnumerationConfig {
  int dim_cap = 24;
};

/// A lattice point with its integer coordinates in the caller's basis and a
/// distance (its norm, or its distance to a target).
struct LatticePoint {
  Coords coords;
  Eigen::VectorXd vector;
  double norm = 0.0;
};

/// √det(Gram).
inline double volume(const LatticeBasis& basis) {
  Eigen::LLT<Eigen::MatrixXd> llt(basis.gram());
  if (llt.info() != Eigen::Success) throw ValidationError("volume: Gram matrix is not positive definite");
  using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatL b = basis.vectors.cast<long double>();
  return static_cast<double>(std::abs(Eigen::PartialPivLU<MatL>(b).determinant()));
}

/// ∏|v_i| with complex coordinates read as moduli.
inline double product_norm(const Eigen::VectorXd& v, Ambient ambient) {
  double p = 1.0;
  if (ambient == Ambient::complex) {
    for (Eigen::Index i = 0; i + 1 < v.size(); i += 2) p *= std::hypot(v[i], v[i + 1]);
  } else {
    for (Eigen::Index i = 0; i < v.size(); ++i) p *= std::abs(v[i]);
  }
  return p;
}

/// LLL-reduced basis with Gram–Schmidt data. reduced = transform · original.
struct ReducedBasis {
  Eigen::MatrixXd basis;
  IntMatrix transform;
  Eigen::MatrixXd mu;        // mu(i, j) for j < i
  Eigen::VectorXd bstar_sq;  // |b*_i|^2
  Eigen::MatrixXd bstar;

  int rank() const { return static_cast<int>(basis.rows()); }

  void orthogonalize() {
    const int d = rank();
    mu = Eigen::MatrixXd::Zero(d, d);
    bstar = basis;
    bstar_sq.resize(d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < i; ++j) {
        mu(i, j) = basis.row(i).dot(bstar.row(j)) / bstar_sq[j];
        bstar.row(i) -= mu(i, j) * bstar.row(j);
      }
      bstar_sq[i] = bstar.row(i).squaredNorm();
    }
  }

  /// Integer coordinates in the original basis of a point given in reduced coordinates.
  Coords to_original(const Coords& x) const {
    Coords out(transform.cols(), 0);
    for (int i = 0; i < rank(); ++i)
      if (x[i] != 0)
        for (Eigen::Index j = 0; j < transform.cols(); ++j) out[j] += x[i] * transform(i, j);
    return out;
  }
};

/// Lovász-condition reduction, delta = 0.99 by default.
inline ReducedBasis lll_reduce(const Eigen::MatrixXd& basis, double delta = 0.99) {
  ReducedBasis rb;
  rb.basis = basis;
  const int d = static_cast<int>(basis.rows());
  rb.transform = IntMatrix::Identity(d, d);
  rb.orthogonalize();
  if (d < 2) return rb;

  int k = 1;
  long iterations = 0;
  const long max_iterations = 100000L * d;
  while (k < d && iterations++ < max_iterations) {
    for (int j = k - 1; j >= 0; --j) {
      const double q = std::round(rb.mu(k, j));
      if (q != 0.0) {
        rb.basis.row(k) -= q * rb.basis.row(j);
        rb.transform.row(k) -= static_cast<long long>(q) * rb.transform.row(j);
        for (int i = 0; i < j; ++i) rb.mu(k, i) -= q * rb.mu(j, i);
        rb.mu(k, j) -= q;
      }
    }
    if (rb.bstar_sq[k] >= (delta - rb.mu(k, k - 1) * rb.mu(k, k - 1)) * rb.bstar_sq[k - 1]) {
      ++k;
    } else {
      rb.basis.row(k).swap(rb.basis.row(k - 1));
      rb.transform.row(k).swap(rb.transform.row(k - 1));
      rb.orthogonalize();
      k = std::max(k - 1, 1);
    }
  }
  rb.orthogonalize();
  return rb;
}

namespace detail {

inline void check_cap(int rank, const EnumerationConfig& cfg) {
  if (rank > cfg.dim_cap)
    throw EnumerationCapError("enumeration rank " + std::to_string(rank) + " exceeds cap " +
                              std::to_string(cfg.dim_cap));
}

/// Depth-first Schnorr–Euchner enumeration of every x with
/// ||Σ x_i b_i - target||^2 <= bound. The visitor receives reduced
/// coordinates and squared distance and returns the (possibly shrunk) bound.
template <class Visitor>
class BallEnumerator {
 public:
  BallEnumerator(const ReducedBasis& rb, const Eigen::VectorXd& target, double bound, Visitor& visit)
      : rb_(rb), visit_(visit), bound_(bound), x_(rb.rank(), 0), center_coord_(rb.rank()) {
    for (int i = 0; i < rb.rank(); ++i) center_coord_[i] = rb.bstar.row(i).dot(target) / rb.bstar_sq[i];
  }

  void run() {
    if (rb_.rank() > 0) descend(rb_.rank() - 1, 0.0);
  }

 private:
  void descend(int level, double partial) {
    double center = center_coord_[level];
    for (int j = level + 1; j < rb_.rank(); ++j) center -= static_cast<double>(x_[j]) * rb_.mu(j, level);
    const double weight = rb_.bstar_sq[level];
    const long long start = std::llround(center);

    auto try_value = [&](long long value) {
      const double diff = static_cast<double>(value) - center;
      const double dist = partial + diff * diff * weight;
      if (dist > bound_) return false;
      x_[level] = value;
      if (level == 0)
        bound_ = visit_(x_, dist);
      else
        descend(level - 1, dist);
      return true;
    };

    if (!try_value(start)) {
      // Nearest integer is already outside the bound, so every other value is too.
      x_[level] = 0;
      return;
    }
    long long up = start + 1;
    long long down = start - 1;
    bool up_open = true;
    bool down_open = true;
    while (up_open || down_open) {
      const bool take_up =
          up_open && (!down_open || std::abs(static_cast<double>(up) - center) <=
                                        std::abs(static_cast<double>(down) - center));
      if (take_up) {
        up_open = try_value(up);
        ++up;
      } else {
        down_open = try_value(down);
        --down;
      }
    }
    x_[level] = 0;
  }

  const ReducedBasis& rb_;
  Visitor& visit_;
  double bound_;
  Coords x_;
  std::vector<double> center_coord_;
};

template <class Visitor>
void enumerate_ball(const ReducedBasis& rb, const Eigen::VectorXd& target, double bound, Visitor&& visit) {
  BallEnumerator<std::remove_reference_t<Visitor>> e(rb, target, bound, visit);
  e.run();
}

inline bool is_zero(const Coords& x) {
  return std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; });
}

// Sign-canonical form: first nonzero coordinate positive.
inline Coords canonical_sign(Coords c) {
  auto it = std::find_if(c.begin(), c.end(), [](long long v) { return v != 0; });
  if (it != c.end() && *it < 0)
    for (auto& v : c) v = -v;
  return c;
}

inline constexpr double kTieTolerance = 1e-10;

inline bool within_tie(double a, double b) { return std::abs(a - b) <= kTieTolerance * std::max({a, b, 1e-300}); }

// Babai nearest-plane point (reduced coordinates), used to seed closest-vector bounds.
inline Coords babai_point(const ReducedBasis& rb, const Eigen::VectorXd& target) {
  Eigen::VectorXd residual = target;
  Coords x(rb.rank(), 0);
  for (int i = rb.rank() - 1; i >= 0; --i) {
    const double c = std::round(rb.bstar.row(i).dot(residual) / rb.bstar_sq[i]);
    x[i] = static_cast<long long>(c);
    residual -= c * rb.basis.row(i).transpose();
  }
  return x;
}

}  // namespace detail

/// Exact shortest nonzero vector. Among equal-norm vectors the one whose
/// sign-canonical integer coordinates are lexicographically smallest wins.
inline LatticePoint shortest_vector(const LatticeBasis& basis, const EnumerationConfig& cfg = {}) {
  detail::check_cap(basis.rank(), cfg);
  const ReducedBasis rb = lll_reduce(basis.vectors);
  double best = rb.basis.rowwise().squaredNorm().minCoeff();
  std::optional<Coords> best_coords;
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(basis.dim());
  detail::enumerate_ball(rb, origin, best * (1.0 + 1e-9), [&](const Coords& x, double dist) {
    if (detail::is_zero(x)) return best * (1.0 + 1e-9);
    Coords c = detail::canonical_sign(rb.to_original(x));
    if (!best_coords || (dist < best && !detail::within_tie(dist, best))) {
      best = dist;
      best_coords = std::move(c);
    } else if (detail::within_tie(dist, best) && c < *best_coords) {
      best = std::min(best, dist);
      best_coords = std::move(c);
    }
    return best * (1.0 + 1e-9);
  });
  Eigen::VectorXd v = basis.point(*best_coords);
  return {*best_coords, v, v.norm()};
}

/// Exact closest lattice vector to `target`; `norm` is the distance.
/// Ties go to the lexicographically smallest integer coordinates.
inline LatticePoint closest_vector(const LatticeBasis& basis, const Eigen::VectorXd& target,
                                   const EnumerationConfig& cfg = {}) {
  detail::check_cap(basis.rank(), cfg);
  const ReducedBasis rb = lll_reduce(basis.vectors);
  Coords seed = rb.to_original(detail::babai_point(rb, target));
  double best = (basis.point(seed) - target).squaredNorm();
  Coords best_coords = std::move(seed);
  // Absolute slack keeps an exact hit (distance 0) inside the search ball.
  const double floor = 1e-20 * (1.0 + target.squaredNorm());
  auto radius_sq = [&] { return best * (1.0 + 1e-9) + floor; };
  detail::enumerate_ball(rb, target, radius_sq(), [&](const Coords& x, double) {
    Coords c = rb.to_original(x);
    const double dist = (basis.point(c) - target).squaredNorm();
    if ((dist < best && !detail::within_tie(dist, best)) || (detail::within_tie(dist, best) && c < best_coords)) {
      best = std::min(best, dist);
      best_coords = std::move(c);
    }
    return radius_sq();
  });
  Eigen::VectorXd v = basis.point(best_coords);
  return {best_coords, v, (target - v).norm()};
}

/// Every lattice vector v with ||v - center|| <= radius, sorted by integer
/// coordinates. `norm` holds the distance to center.
inline std::vector<LatticePoint> points_in_ball(const LatticeBasis& basis, const Eigen::VectorXd& center,
                                                double radius, const EnumerationConfig& cfg = {}) {
  detail::check_cap(basis.rank(), cfg);
  const ReducedBasis rb = lll_reduce(basis.vectors);
  std::vector<LatticePoint> out;
  const double bound = radius * radius;
  detail::enumerate_ball(rb, center, bound * (1.0 + 1e-12), [&](const Coords& x, double) {
    Coords c = rb.to_original(x);
    Eigen::VectorXd v = basis.point(c);
    const double dist = (v - center).norm();
    if (dist <= radius) out.push_back({std::move(c), std::move(v), dist});
    return bound * (1.0 + 1e-12);
  });
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) { return a.coords < b.coords; });
  return out;
}

/// Number of lattice vectors within `radius` of `center`.
inline std::size_t count_in_ball(const LatticeBasis& basis, const Eigen::VectorXd& center, double radius,
                                 const EnumerationConfig& cfg = {}) {
  return points_in_ball(basis, center, radius, cfg).size();
}

/// Real coordinates of v in the basis (v = Σ c_i b_i).
inline Eigen::VectorXd lattice_coordinates(const LatticeBasis& basis, const Eigen::VectorXd& v) {
  return basis.vectors.transpose().partialPivLu().solve(v);
}

inline bool contains(const LatticeBasis& basis, const Eigen::VectorXd& v, double tol = 1e-8) {
  const Eigen::VectorXd c = lattice_coordinates(basis, v);
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (std::abs(c[i] - std::round(c[i])) > tol) return false;
  return true;
}

struct ProductDistance {
  double dp_min = 0.0;
  bool exact = false;
  LatticePoint witness;
};

/// Minimum product norm over nonzero vectors of Euclidean norm <= radius.
/// `exact` is set only when `exact_hint` (a proven floor) is attained.
inline ProductDistance min_product_distance(const LatticeBasis& basis, double radius,
                                            std::optional<double> exact_hint = std::nullopt,
                                            const EnumerationConfig& cfg = {}) {
  detail::check_cap(basis.rank(), cfg);
  const ReducedBasis rb = lll_reduce(basis.vectors);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(basis.dim());
  const double bound = radius * radius;
  const int coords_count = basis.n;
  std::optional<ProductDistance> best;
  detail::enumerate_ball(rb, origin, bound, [&](const Coords& x, double) {
    if (detail::is_zero(x)) return bound;
    Coords c = detail::canonical_sign(rb.to_original(x));
    Eigen::VectorXd v = basis.point(c);
    const double norm = v.norm();
    const double p = product_norm(v, basis.ambient);
    // AM-GM scale of a vector with this norm; products far below it are zero.
    const double scale = std::pow(norm / std::sqrt(static_cast<double>(coords_count)), coords_count);
    if (p <= 1e-10 * scale) throw ZeroProductNormError(c);
    if (!best || (p < best->dp_min && !detail::within_tie(p, best->dp_min)) ||
        (detail::within_tie(p, best->dp_min) && c < best->witness.coords)) {
      best = ProductDistance{p, false, {std::move(c), std::move(v), norm}};
    }
    return bound;
  });
  if (!best) throw ValidationError("min_product_distance: no nonzero vector within radius");
  if (exact_hint) best->exact = std::abs(best->dp_min - *exact_hint) <= 1e-9 * std::max(1.0, *exact_hint);
  return *best;
}

struct LatticeInvariants {
  double volume = 0.0;
  double sv = 0.0;
  std::optional<double> dp_min;  // empty when a zero product norm exists
  double nsv = 0.0;
  std::optional<double> ndp;
  bool dp_exact = false;
};

/// Normalized shortest vector: sv / Vol^{1/2n} (complex) or sv / Vol^{1/n} (real).
inline double normalize_sv(double sv, double vol, const LatticeBasis& basis) {
  return sv / std::pow(vol, 1.0 / basis.rank());
}

/// Normalized product distance: dp / Vol^{1/2} (complex) or dp / Vol (real).
inline double normalize_dp(double dp, double vol, const LatticeBasis& basis) {
  return basis.is_complex() ? dp / std::sqrt(vol) : dp / vol;
}

/// Assembles Vol, sv, dp_min and their normalized forms. The product-distance
/// search radius is raised to sv when smaller so the shortest vector is seen.
inline LatticeInvariants invariants(const LatticeBasis& basis, double radius,
                                    std::optional<double> exact_hint = std::nullopt,
                                    const EnumerationConfig& cfg = {}) {
  LatticeInvariants inv;
  inv.volume = volume(basis);
  inv.sv = shortest_vector(basis, cfg).norm;
  inv.nsv = normalize_sv(inv.sv, inv.volume, basis);
  try {
    const auto pd = min_product_distance(basis, std::max(radius, inv.sv * (1.0 + 1e-9)), exact_hint, cfg);
    inv.dp_min = pd.dp_min;
    inv.dp_exact = pd.exact;
    inv.ndp = normalize_dp(pd.dp_min, inv.volume, basis);
  } catch (const ZeroProductNormError&) {
    inv.dp_min.reset();
    inv.ndp.reset();
  }
  return inv;
}

}  // namespace nflab
