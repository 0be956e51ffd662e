#pragma once

// Explicit number fields: catalog loading, canonical embeddings of the ring
// of integers and of integral ideals, discriminant verification and the ideal
// minimum min(I).
//
// Field elements are rational coordinate vectors in the power basis
// 1, θ, ..., θ^{m-1} of a fixed root θ of the (monic, integral) defining
// polynomial. Integral bases and ideal Z-bases are catalog inputs.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nflab/errors.hpp"
#include "nflab/lattice.hpp"

namespace nflab {

using Rational = boost::rational<long long>;
using RationalVector = std::vector<Rational>;
using ComplexL = std::complex<long double>;

struct IdealSpec {
  std::string label;
  std::vector<RationalVector> z_basis;  // power-basis coordinates
  long long norm = 1;                   // [O_K : I]
  std::string class_label;
  bool principal = true;
  std::optional<long long> certified_min_norm;  // min |Nr(x)| over nonzero x in I, if proven
};

struct FieldSpec {
  std::string name;
  int degree = 0;
  int r1 = 0;
  int r2 = 0;
  std::vector<long long> min_poly;  // constant term first, monic
  std::vector<RationalVector> integral_basis;
  long long disc = 0;
  std::vector<IdealSpec> ideals;

  bool totally_real() const { return r2 == 0; }
  /// Coordinate count of the embedding: degree (real) or degree/2 (complex).
  int n() const { return totally_real() ? degree : r2; }
  long double abs_disc() const { return std::abs(static_cast<long double>(disc)); }
};

// ---------------------------------------------------------------------------
// Exact arithmetic in the power basis

namespace detail {

inline Rational rational_det(std::vector<RationalVector> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].numerator() == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].numerator() == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

/// Solves x · rows = v for x (rows square, nonsingular).
inline RationalVector rational_solve_row(const std::vector<RationalVector>& rows, const RationalVector& v) {
  const std::size_t n = rows.size();
  // Augmented system rowsᵀ x = v.
  std::vector<RationalVector> a(n, RationalVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rows[j][i];
    a[i][n] = v[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].numerator() == 0) ++pivot;
    if (pivot == n) throw ValidationError("singular rational system");
    std::swap(a[pivot], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].numerator() == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
  return x;
}

inline bool all_integral(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r.denominator() == 1; });
}

}  // namespace detail

/// Product of two elements, reduced modulo the defining polynomial.
inline RationalVector multiply(const FieldSpec& field, const RationalVector& a, const RationalVector& b) {
  const int m = field.degree;
  std::vector<Rational> prod(2 * m - 1, Rational(0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) prod[i + j] += a[i] * b[j];
  // θ^m = -Σ_{k<m} c_k θ^k.
  for (int deg = 2 * m - 2; deg >= m; --deg) {
    const Rational lead = prod[deg];
    if (lead.numerator() == 0) continue;
    prod[deg] = 0;
    for (int k = 0; k < m; ++k) prod[deg - m + k] -= lead * Rational(field.min_poly[k]);
  }
  return RationalVector(prod.begin(), prod.begin() + m);
}

/// Power-basis coordinates of Σ c_j w_j.
inline RationalVector combine(const std::vector<RationalVector>& basis, const Coords& c) {
  RationalVector out(basis.front().size(), Rational(0));
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += Rational(c[j]) * basis[j][k];
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings

/// All m complex roots of the defining polynomial, sorted by (re, im), and
/// the indices of the embeddings used as lattice coordinates: every root for
/// a totally real field, the root with positive imaginary part from each
/// conjugate pair for a totally complex one.
struct FieldEmbedding {
  std::vector<ComplexL> roots;
  std::vector<std::size_t> chosen;
  bool totally_real = true;

  /// σ_i(x) for every root.
  std::vector<ComplexL> evaluate(const RationalVector& x) const {
    std::vector<ComplexL> out(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      ComplexL acc = 0;
      for (std::size_t k = x.size(); k-- > 0;)
        acc = acc * roots[i] +
              static_cast<long double>(x[k].numerator()) / static_cast<long double>(x[k].denominator());
      out[i] = acc;
    }
    return out;
  }

  /// |Nr_{K/Q}(x)| as the product over all m embeddings.
  long double abs_norm(const RationalVector& x) const {
    long double p = 1;
    for (const auto& s : evaluate(x)) p *= std::abs(s);
    return p;
  }

  /// ψ(x) in the real representation of the lattice ambient space.
  Eigen::VectorXd psi(const RationalVector& x) const {
    const auto s = evaluate(x);
    Eigen::VectorXd v(totally_real ? chosen.size() : 2 * chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (totally_real) {
        v[i] = static_cast<double>(s[chosen[i]].real());
      } else {
        v[2 * i] = static_cast<double>(s[chosen[i]].real());
        v[2 * i + 1] = static_cast<double>(s[chosen[i]].imag());
      }
    }
    return v;
  }
};

inline constexpr double kRootSeparation = 1e-8;

/// Roots via the companion matrix, polished by Newton steps in long double.
inline std::vector<ComplexL> polynomial_roots(const std::vector<long long>& poly) {
  const int m = static_cast<int>(poly.size()) - 1;
  if (m < 1) throw ValidationError("polynomial must have positive degree");
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -static_cast<double>(poly[i]) / static_cast<double>(poly[m]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("companion eigenvalue solver failed");

  std::vector<ComplexL> roots;
  for (int i = 0; i < m; ++i) {
    ComplexL z(solver.eigenvalues()[i].real(), solver.eigenvalues()[i].imag());
    for (int it = 0; it < 50; ++it) {
      ComplexL f = 0, df = 0;
      for (int k = m; k >= 0; --k) {
        df = df * z + f;
        f = f * z + static_cast<long double>(poly[k]);
      }
      if (std::abs(df) == 0) break;
      const ComplexL step = f / df;
      z -= step;
      if (std::abs(step) <= 1e-18L * std::max<long double>(1, std::abs(z))) break;
    }
    // Snap numerically real roots onto the real axis.
    if (std::abs(z.imag()) < 1e-12L * std::max<long double>(1, std::abs(z))) z = ComplexL(z.real(), 0);
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](const ComplexL& a, const ComplexL& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < kRootSeparation)
        throw ConvergenceError("polynomial roots not separated to 1e-8 (repeated root?)");
  return roots;
}

inline FieldEmbedding embed_field(const FieldSpec& field) {
  FieldEmbedding e;
  e.roots = polynomial_roots(field.min_poly);
  e.totally_real = field.totally_real();
  std::vector<std::size_t> real_idx;
  for (std::size_t i = 0; i < e.roots.size(); ++i) {
    if (e.roots[i].imag() == 0)
      real_idx.push_back(i);
    else if (e.roots[i].imag() > 0)
      e.chosen.push_back(i);
  }
  if (static_cast<int>(real_idx.size()) != field.r1)
    throw ValidationError("signature mismatch: " + std::to_string(real_idx.size()) + " real roots but r1 = " +
                          std::to_string(field.r1));
  if (e.totally_real) e.chosen = real_idx;
  return e;
}

inline LatticeBasis lattice_from_elements(const FieldEmbedding& e, const std::vector<RationalVector>& elements) {
  const Eigen::Index dim = e.psi(elements.front()).size();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(elements.size()), dim);
  for (std::size_t j = 0; j < elements.size(); ++j) rows.row(static_cast<Eigen::Index>(j)) = e.psi(elements[j]).transpose();
  return e.totally_real ? LatticeBasis::real(std::move(rows)) : LatticeBasis::complex(std::move(rows));
}

/// ψ(O_K): rows are ψ(w_j) for the catalog integral basis.
inline LatticeBasis embedding_matrix(const FieldSpec& field) {
  return lattice_from_elements(embed_field(field), field.integral_basis);
}

/// Volume of ψ(O_K) predicted from the discriminant: 2^{-n}√|d_K| (complex) or √|d_K| (real).
inline double predicted_volume(const FieldSpec& field) {
  const long double root = std::sqrt(field.abs_disc());
  return static_cast<double>(field.totally_real() ? root : root * std::pow(2.0L, -field.n()));
}

/// Nsv(ψ(O_K)) from the discriminant: √(2n)/|d_K|^{1/4n} (complex) or √n/|d_K|^{1/2n} (real).
inline double predicted_nsv(const FieldSpec& field) {
  const double n = field.n();
  const double d = static_cast<double>(field.abs_disc());
  return field.totally_real() ? std::sqrt(n) / std::pow(d, 1.0 / (2.0 * n))
                              : std::sqrt(2.0 * n) / std::pow(d, 1.0 / (4.0 * n));
}

/// Nd_p,min(ψ(O_K)) from the discriminant: 2^{n/2}/|d_K|^{1/4} (complex) or 1/√|d_K| (real).
inline double predicted_ndp(const FieldSpec& field) {
  const double d = static_cast<double>(field.abs_disc());
  return field.totally_real() ? 1.0 / std::sqrt(d) : std::pow(2.0, field.n() / 2.0) / std::pow(d, 0.25);
}

/// |d_K| recovered from the embedded lattice volume, relative to the catalog value.
inline double discriminant_check(const FieldSpec& field) {
  const long double vol = volume(embedding_matrix(field));
  const long double scaled = field.totally_real() ? vol : vol * std::pow(2.0L, field.n());
  const long double recovered = scaled * scaled;
  return static_cast<double>(std::abs(recovered - field.abs_disc()) / field.abs_disc());
}

/// ψ(I) for an integral ideal given by a Z-basis.
inline LatticeBasis ideal_lattice(const FieldSpec& field, const IdealSpec& ideal) {
  LatticeBasis basis = lattice_from_elements(embed_field(field), ideal.z_basis);
  const double expected = static_cast<double>(ideal.norm) * predicted_volume(field);
  const double got = volume(basis);
  if (std::abs(got - expected) > 1e-9 * expected)
    throw ValidationError("ideal " + ideal.label + ": volume " + std::to_string(got) + " != N(I)·Vol(O_K) = " +
                          std::to_string(expected));
  return basis;
}

/// The unit ideal O_K as an IdealSpec.
inline IdealSpec unit_ideal(const FieldSpec& field) {
  IdealSpec I;
  I.label = "O_K";
  I.z_basis = field.integral_basis;
  I.norm = 1;
  I.class_label = "principal";
  I.principal = true;
  I.certified_min_norm = 1;
  return I;
}

struct MinIdealResult {
  double value = 0.0;          // min(I) under the field's convention
  long long min_abs_norm = 0;  // min |Nr(x)| found
  Coords witness;              // coordinates in the ideal's Z-basis
  bool certified = false;      // false: upper bound only
  double radius = 0.0;
};

/// 1.5·√m·Vol(ψ(I))^{1/m}, and at least 2√m·N(I)^{1/m} (room for elements
/// of norm up to 2^m·N(I) even when the lattice is dense).
inline double default_ideal_radius(const FieldSpec& field, const IdealSpec& ideal) {
  const double m = field.degree;
  const double vol = static_cast<double>(ideal.norm) * predicted_volume(field);
  return std::sqrt(m) * std::max(1.5 * std::pow(vol, 1.0 / m), 2.0 * std::pow(static_cast<double>(ideal.norm), 1.0 / m));
}

/// min(I) = min √(|Nr(x)|/N(I)) (complex) or |Nr(x)|/N(I) (real) over nonzero
/// x ∈ I with ||ψ(x)|| <= search_radius. Exact when certified.
inline MinIdealResult min_ideal(const FieldSpec& field, const IdealSpec& ideal, double search_radius,
                                const EnumerationConfig& cfg = {}) {
  const FieldEmbedding e = embed_field(field);
  const LatticeBasis basis = ideal_lattice(field, ideal);
  const auto points = points_in_ball(basis, Eigen::VectorXd::Zero(basis.dim()), search_radius, cfg);

  MinIdealResult r;
  r.radius = search_radius;
  bool found = false;
  for (const auto& p : points) {
    if (detail::is_zero(p.coords)) continue;
    const long double nr = e.abs_norm(combine(ideal.z_basis, p.coords));
    const long long rounded = std::llround(nr);
    if (std::abs(nr - static_cast<long double>(rounded)) > 1e-6L * std::max<long double>(1, nr))
      throw ValidationError("ideal " + ideal.label + ": element norm " + std::to_string(static_cast<double>(nr)) +
                            " is not an integer");
    if (!found || rounded < r.min_abs_norm) {
      r.min_abs_norm = rounded;
      r.witness = p.coords;
      found = true;
    }
  }
  if (!found) throw ValidationError("min_ideal: no nonzero ideal element within radius " + std::to_string(search_radius));

  const double ratio = static_cast<double>(r.min_abs_norm) / static_cast<double>(ideal.norm);
  r.value = field.totally_real() ? ratio : std::sqrt(ratio);

  if (ideal.certified_min_norm) {
    if (r.min_abs_norm < *ideal.certified_min_norm)
      throw ValidationError("ideal " + ideal.label + ": found |Nr| below the catalog-certified minimum");
    r.certified = r.min_abs_norm == *ideal.certified_min_norm;
  } else if (!field.totally_real() && field.n() == 1) {
    // Imaginary quadratic: |Nr(x)| = ||ψ(x)||², so the ball holds every element of smaller norm.
    r.certified = static_cast<double>(r.min_abs_norm) <= search_radius * search_radius;
  }
  return r;
}

inline MinIdealResult min_ideal(const FieldSpec& field, const IdealSpec& ideal) {
  return min_ideal(field, ideal, default_ideal_radius(field, ideal));
}

/// Normalized product distance predicted from min(I):
/// 2^{n/2} min(I) / |d_K|^{1/4} (complex) or min(I) / √|d_K| (real).
inline double ideal_ndp(const FieldSpec& field, double min_value) {
  const double d = static_cast<double>(field.abs_disc());
  return field.totally_real() ? min_value / std::sqrt(d)
                              : std::pow(2.0, field.n() / 2.0) * min_value / std::pow(d, 0.25);
}

/// N_min(K) from the catalog: the largest, over ideal classes, of the smallest
/// listed norm in that class. Assumes each class lists its minimal-norm ideal.
inline long long catalog_n_min(const FieldSpec& field) {
  std::map<std::string, long long> smallest;
  smallest["principal"] = 1;
  for (const auto& I : field.ideals) {
    const std::string cls = I.principal ? "principal" : I.class_label;
    auto it = smallest.find(cls);
    if (it == smallest.end() || I.norm < it->second) smallest[cls] = I.norm;
  }
  long long n_min = 1;
  for (const auto& [cls, norm] : smallest) n_min = std::max(n_min, norm);
  return n_min;
}

/// Best normalized product distance over all ideals:
/// 2^{n/2}√N_min / |d_K|^{1/4} (complex) or N_min / √|d_K| (real).
inline double idealform_prediction(const FieldSpec& field, long long n_min) {
  const double d = static_cast<double>(field.abs_disc());
  return field.totally_real() ? static_cast<double>(n_min) / std::sqrt(d)
                              : std::pow(2.0, field.n() / 2.0) * std::sqrt(static_cast<double>(n_min)) / std::pow(d, 0.25);
}

// ---------------------------------------------------------------------------
// Validation

inline void validate_ideal(const FieldSpec& field, const IdealSpec& I) {
  const std::string where = "field " + field.name + ", ideal " + I.label + ": ";
  if (static_cast<int>(I.z_basis.size()) != field.degree)
    throw ValidationError(where + "basis must have degree-many vectors");
  for (const auto& v : I.z_basis)
    if (static_cast<int>(v.size()) != field.degree) throw ValidationError(where + "basis vector length != degree");
  if (I.norm <= 0) throw ValidationError(where + "norm must be positive");

  for (const auto& z : I.z_basis)
    if (!detail::all_integral(detail::rational_solve_row(field.integral_basis, z)))
      throw ValidationError(where + "basis element is not in O_K");
  const Rational index = detail::rational_det(I.z_basis) / detail::rational_det(field.integral_basis);
  if (boost::abs(index) != Rational(I.norm))
    throw ValidationError(where + "index [O_K : I] = " + std::to_string(boost::rational_cast<double>(boost::abs(index))) +
                          " != norm " + std::to_string(I.norm));
  for (const auto& w : field.integral_basis)
    for (const auto& z : I.z_basis)
      if (!detail::all_integral(detail::rational_solve_row(I.z_basis, multiply(field, w, z))))
        throw ValidationError(where + "not closed under multiplication by O_K");
  if (I.principal && I.norm == 1 && I.certified_min_norm && *I.certified_min_norm != 1)
    throw ValidationError(where + "unit ideal must have minimum norm 1");
}

inline void validate_field(const FieldSpec& f) {
  const std::string where = "field " + f.name + ": ";
  if (f.degree <= 0) throw ValidationError(where + "degree must be positive");
  if (f.r1 < 0 || f.r2 < 0 || f.r1 + 2 * f.r2 != f.degree) throw ValidationError(where + "r1 + 2*r2 != degree");
  if (f.r1 > 0 && f.r2 > 0) throw ValidationError(where + "mixed signature: field must be totally real or totally complex");
  if (static_cast<int>(f.min_poly.size()) != f.degree + 1 || f.min_poly.back() != 1)
    throw ValidationError(where + "minpoly must be monic of the stated degree");
  if (static_cast<int>(f.integral_basis.size()) != f.degree)
    throw ValidationError(where + "integral basis must have degree-many vectors");
  for (const auto& v : f.integral_basis)
    if (static_cast<int>(v.size()) != f.degree) throw ValidationError(where + "basis vector length != degree");
  if (detail::rational_det(f.integral_basis).numerator() == 0) throw ValidationError(where + "integral basis is singular");
  if (f.disc == 0) throw ValidationError(where + "discriminant must be nonzero");
  if ((f.disc < 0) != (f.r2 % 2 == 1)) throw ValidationError(where + "discriminant sign must be (-1)^r2");
  try {
    embed_field(f);  // squarefree (separated roots) and signature
  } catch (const ConvergenceError& e) {
    throw ValidationError(where + e.what());
  }
  const double mismatch = discriminant_check(f);
  if (mismatch > 1e-6)
    throw ValidationError(where + "discriminant mismatch " + std::to_string(mismatch) + " (bad catalog entry)");
  for (const auto& I : f.ideals) {
    validate_ideal(f, I);
    ideal_lattice(f, I);
  }
}

// ---------------------------------------------------------------------------
// Catalog text format

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline long long parse_integer(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected integer, got '" + s + "'");
  }
}

inline Rational parse_rational(const std::string& s, std::size_t line) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_integer(s, line));
  const long long q = parse_integer(trim(s.substr(slash + 1)), line);
  if (q == 0) throw ParseError(line, "zero denominator in '" + s + "'");
  return Rational(parse_integer(trim(s.substr(0, slash)), line), q);
}

inline std::vector<RationalVector> parse_vectors(const std::string& s, std::size_t line) {
  std::vector<RationalVector> out;
  for (const auto& vec : split(s, ';')) {
    if (vec.empty()) continue;
    RationalVector v;
    for (const auto& x : split(vec, ',')) v.push_back(parse_rational(x, line));
    out.push_back(std::move(v));
  }
  return out;
}

inline bool parse_bool(const std::string& s, std::size_t line) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ParseError(line, "expected boolean, got '" + s + "'");
}

}  // namespace detail

/// Parses catalog text. Sections `[field]` and `[ideal]`; an ideal belongs to
/// the most recent field. Lines starting with '#' are comments.
inline std::vector<FieldSpec> parse_catalog(std::istream& in, bool validate = true) {
  std::vector<FieldSpec> fields;
  enum class Section { none, field, ideal } section = Section::none;
  std::map<std::string, std::size_t> seen;  // key -> line, per section
  std::string raw;
  std::size_t line = 0;

  auto require = [&](const char* key) {
    if (!seen.count(key))
      throw ParseError(line, std::string("section missing required key '") + key + "'");
  };
  auto close_section = [&]() {
    if (section == Section::field) {
      for (auto k : {"name", "degree", "r1", "r2", "minpoly", "basis", "disc"}) require(k);
    } else if (section == Section::ideal) {
      for (auto k : {"name", "basis", "norm"}) require(k);
    }
    seen.clear();
  };

  while (std::getline(in, raw)) {
    ++line;
    const std::string text = detail::trim(raw);
    if (text.empty() || text[0] == '#') continue;
    if (text == "[field]") {
      close_section();
      section = Section::field;
      fields.emplace_back();
      continue;
    }
    if (text == "[ideal]") {
      close_section();
      if (fields.empty()) throw ParseError(line, "[ideal] before any [field]");
      section = Section::ideal;
      fields.back().ideals.emplace_back();
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    if (section == Section::none) throw ParseError(line, "key outside of a section");
    const std::string key = detail::trim(text.substr(0, eq));
    const std::string value = detail::trim(text.substr(eq + 1));
    if (seen.count(key)) throw ParseError(line, "duplicate key '" + key + "'");
    seen[key] = line;

    if (section == Section::field) {
      FieldSpec& f = fields.back();
      if (key == "name") f.name = value;
      else if (key == "degree") f.degree = static_cast<int>(detail::parse_integer(value, line));
      else if (key == "r1") f.r1 = static_cast<int>(detail::parse_integer(value, line));
      else if (key == "r2") f.r2 = static_cast<int>(detail::parse_integer(value, line));
      else if (key == "minpoly") {
        for (const auto& c : detail::split(value, ',')) f.min_poly.push_back(detail::parse_integer(c, line));
      } else if (key == "basis") f.integral_basis = detail::parse_vectors(value, line);
      else if (key == "disc") f.disc = detail::parse_integer(value, line);
      else throw ParseError(line, "unknown field key '" + key + "'");
    } else {
      IdealSpec& I = fields.back().ideals.back();
      if (key == "name") I.label = value;
      else if (key == "basis") I.z_basis = detail::parse_vectors(value, line);
      else if (key == "norm") I.norm = detail::parse_integer(value, line);
      else if (key == "class") I.class_label = value;
      else if (key == "principal") I.principal = detail::parse_bool(value, line);
      else if (key == "certified_min_norm") I.certified_min_norm = detail::parse_integer(value, line);
      else throw ParseError(line, "unknown ideal key '" + key + "'");
    }
  }
  close_section();
  for (auto& f : fields)
    for (auto& I : f.ideals)
      if (I.class_label.empty()) I.class_label = I.principal ? "principal" : I.label;
  if (validate)
    for (const auto& f : fields) validate_field(f);
  return fields;
}

inline std::vector<FieldSpec> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open catalog '" + path + "'");
  return parse_catalog(in);
}

inline const FieldSpec& find_field(const std::vector<FieldSpec>& catalog, const std::string& name) {
  for (const auto& f : catalog)
    if (f.name == name) return f;
  throw ValidationError("unknown field '" + name + "'");
}

}  // namespace nflab
