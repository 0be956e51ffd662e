#pragma once

// Batch experiment runner behind the nflab CLI. Every run writes a CSV whose
// first lines are '#' comments recording the version, the configuration and
// the master seed. Worker count and output path are execution details and are
// left out of the header so repeated runs compare byte for byte.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nflab/analysis.hpp"
#include "nflab/channel.hpp"
#include "nflab/codebook.hpp"
#include "nflab/decoder.hpp"
#include "nflab/errors.hpp"
#include "nflab/lattice.hpp"
#include "nflab/numberfield.hpp"
#include "nflab/rng.hpp"

namespace nflab {

inline constexpr const char* kVersion = "0.1.0";

enum class Subcommand { invariants, rates, bounds, simulate, ideal };
enum class DecoderChoice { nld, ml, both };

inline std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::invariants: return "invariants";
    case Subcommand::rates: return "rates";
    case Subcommand::bounds: return "bounds";
    case Subcommand::simulate: return "simulate";
    case Subcommand::ideal: return "ideal";
  }
  return "?";
}

inline Subcommand parse_subcommand(const std::string& s) {
  for (auto c : {Subcommand::invariants, Subcommand::rates, Subcommand::bounds, Subcommand::simulate, Subcommand::ideal})
    if (to_string(c) == s) return c;
  throw ValidationError("unknown subcommand '" + s + "'");
}

inline std::string to_string(DecoderChoice d) {
  switch (d) {
    case DecoderChoice::nld: return "nld";
    case DecoderChoice::ml: return "ml";
    case DecoderChoice::both: return "both";
  }
  return "?";
}

inline DecoderChoice parse_decoder(const std::string& s) {
  for (auto d : {DecoderChoice::nld, DecoderChoice::ml, DecoderChoice::both})
    if (to_string(d) == s) return d;
  throw ValidationError("unknown decoder '" + s + "'");
}

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::invariants;
  std::string field_name;  // empty: every catalog field (invariants, ideal)
  double rate = 1.0;
  std::vector<double> snr_db_grid{20.0};
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 1;
  DecoderChoice decoder = DecoderChoice::both;
  ChannelModel model = ChannelModel::awgn_real;
  std::string output_path;    // empty: stdout
  std::string codebook_path;  // simulate: CSV of the first grid point's codebook
  unsigned workers = 1;
  EnumerationConfig enumeration;

  void validate() const {
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (workers < 1) throw ValidationError("workers must be >= 1");
    if (subcommand == Subcommand::simulate) {
      if (snr_db_grid.empty()) throw ValidationError("simulate needs a nonempty SNR grid");
      if (field_name.empty()) throw ValidationError("simulate needs --field");
    }
  }
};

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

inline std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string fmt(std::optional<double> v) { return v ? fmt(*v) : std::string("unknown"); }

/// Quotes a CSV cell when it holds a comma or a double quote.
inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline void write_header(std::ostream& out, const ExperimentConfig& c) {
  out << "# nflab " << kVersion << '\n';
  out << "# subcommand=" << to_string(c.subcommand) << '\n';
  out << "# field=" << (c.field_name.empty() ? "*" : c.field_name) << '\n';
  out << "# rate=" << fmt(c.rate) << '\n';
  out << "# snr_db=";
  for (std::size_t i = 0; i < c.snr_db_grid.size(); ++i) out << (i ? "," : "") << fmt(c.snr_db_grid[i]);
  out << '\n';
  out << "# trials=" << c.trials << '\n';
  out << "# seed=" << c.master_seed << '\n';
  out << "# decoder=" << to_string(c.decoder) << '\n';
  out << "# model=" << to_string(c.model) << '\n';
  out << "# dim_cap=" << c.enumeration.dim_cap << '\n';
}

/// Outcome of a run: false when a validation invariant failed (output still written).
struct RunStatus {
  bool ok = true;
  std::vector<std::string> failures;

  void fail(std::string msg) {
    ok = false;
    failures.push_back(std::move(msg));
  }
};

namespace detail {

inline std::vector<const FieldSpec*> selected_fields(const ExperimentConfig& c, const std::vector<FieldSpec>& catalog) {
  std::vector<const FieldSpec*> out;
  if (c.field_name.empty()) {
    for (const auto& f : catalog) out.push_back(&f);
  } else {
    out.push_back(&find_field(catalog, c.field_name));
  }
  return out;
}

inline void write_rate_row(std::ostream& out, const RateBound& rb, double p_db, std::optional<double> gap) {
  out << csv_cell(rb.label) << ',' << to_string(rb.channel) << ',' << fmt(p_db) << ',' << fmt(rb.rate) << ','
      << (gap ? fmt(*gap) : std::string("NA")) << ',';
  for (std::size_t i = 0; i < rb.parameters.size(); ++i)
    out << (i ? ";" : "") << rb.parameters[i].first << '=' << fmt(rb.parameters[i].second);
  out << '\n';
}

inline constexpr const char* kRateColumns = "label,channel,P_db,rate_bits,gap_bits,params\n";

}  // namespace detail

inline RunStatus run_invariants(const ExperimentConfig& c, const std::vector<FieldSpec>& catalog, std::ostream& out) {
  RunStatus st;
  out << "field,degree,r1,r2,disc,volume,volume_pred,sv,nsv,nsv_pred,dp_min,dp_exact,ndp,ndp_pred,max_rel_mismatch,"
         "disc_mismatch\n";
  for (const FieldSpec* f : detail::selected_fields(c, catalog)) {
    const LatticeBasis b = embedding_matrix(*f);
    const double hint = 1.0;  // |Nr(x)| >= 1 on O_K, attained at x = 1
    const LatticeInvariants inv = invariants(b, 1.5 * std::sqrt(static_cast<double>(f->degree)), hint, c.enumeration);
    const double vp = predicted_volume(*f), sp = predicted_nsv(*f), dp = predicted_ndp(*f);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    double mismatch = std::max(rel(inv.volume, vp), rel(inv.nsv, sp));
    if (inv.ndp) mismatch = std::max(mismatch, rel(*inv.ndp, dp));
    const double disc = discriminant_check(*f);
    out << csv_cell(f->name) << ',' << f->degree << ',' << f->r1 << ',' << f->r2 << ',' << f->disc << ',' << fmt(inv.volume) << ','
        << fmt(vp) << ',' << fmt(inv.sv) << ',' << fmt(inv.nsv) << ',' << fmt(sp) << ',' << fmt(inv.dp_min) << ','
        << (inv.dp_exact ? "true" : "false") << ',' << fmt(inv.ndp) << ',' << fmt(dp) << ',' << fmt(mismatch) << ','
        << fmt(disc) << '\n';
    if (mismatch > 1e-8) st.fail(f->name + ": invariant mismatch " + fmt(mismatch));
    if (!inv.ndp || !inv.dp_exact) st.fail(f->name + ": product distance floor not attained");
  }
  return st;
}

/// Martinet-constant rows and capacity references for all four models at each
/// grid point, plus the field's own lattice gap when a field is selected.
inline RunStatus run_rates(const ExperimentConfig& c, const std::vector<FieldSpec>& catalog, std::ostream& out) {
  RunStatus st;
  const FieldSpec* field = c.field_name.empty() ? nullptr : &find_field(catalog, c.field_name);
  std::optional<LatticeInvariants> inv;
  if (field) inv = invariants(embedding_matrix(*field), 1.5 * std::sqrt(static_cast<double>(field->degree)), 1.0, c.enumeration);
  out << detail::kRateColumns;
  const ChannelModel models[] = {ChannelModel::awgn_complex, ChannelModel::rayleigh_complex, ChannelModel::awgn_real,
                                 ChannelModel::rayleigh_real};
  for (double db : c.snr_db_grid) {
    const double p = db_to_power(db);
    for (auto m : models) {
      const RateBound rb = achievable_rate(m, p, is_complex(m) ? constants::martinet_g : constants::martinet_g1,
                                           "martinet_" + to_string(m));
      detail::write_rate_row(out, rb, db, rb.gap);
      RateBound cap;
      cap.label = "capacity_reference_" + to_string(m);
      cap.channel = m;
      cap.power = p;
      cap.rate = capacity_reference(m, p);
      cap.parameters = {{"P", p}};
      detail::write_rate_row(out, cap, db, std::nullopt);
      if (cap.rate <= rb.rate) st.fail("achievable rate above capacity reference for " + to_string(m));
      if (field && is_complex(m) == !field->totally_real()) {
        const RateBound lb = gap_from_lattice(*inv, field->n(), m, p, field->name + "_" + to_string(m));
        detail::write_rate_row(out, lb, db, lb.gap);
      }
    }
  }
  return st;
}

inline RunStatus run_bounds(const ExperimentConfig& c, std::ostream& out) {
  out << detail::kRateColumns;
  for (double db : c.snr_db_grid)
    for (const auto& rb : bound_table(db_to_power(db))) detail::write_rate_row(out, rb, db, rb.gap);
  return {};
}

inline RunStatus run_ideal(const ExperimentConfig& c, const std::vector<FieldSpec>& catalog, std::ostream& out) {
  RunStatus st;
  out << "field,ideal,class,principal,norm,min_abs_norm,min_I,certified,nd_lattice,nd_formula,n_min,nd_idealform_pred,"
         "attains_pred\n";
  for (const FieldSpec* f : detail::selected_fields(c, catalog)) {
    std::vector<IdealSpec> ideals{unit_ideal(*f)};
    for (const auto& I : f->ideals)
      if (I.norm != 1) ideals.push_back(I);
    const long long n_min = catalog_n_min(*f);
    const double pred = idealform_prediction(*f, n_min);
    for (const auto& I : ideals) {
      const MinIdealResult m = min_ideal(*f, I, default_ideal_radius(*f, I), c.enumeration);
      const LatticeBasis lat = ideal_lattice(*f, I);
      // Route 1: normalized product distance read off the enumerated ideal lattice.
      const ProductDistance pd = min_product_distance(lat, m.radius, std::nullopt, c.enumeration);
      const double nd_lattice = normalize_dp(pd.dp_min, volume(lat), lat);
      // Route 2: closed form from min(I).
      const double nd_formula = ideal_ndp(*f, m.value);
      const bool attains = std::abs(nd_formula - pred) <= 1e-9 * pred;
      out << csv_cell(f->name) << ',' << csv_cell(I.label) << ',' << csv_cell(I.principal ? "principal" : I.class_label) << ','
          << (I.principal ? "true" : "false") << ',' << I.norm << ',' << m.min_abs_norm << ',' << fmt(m.value) << ','
          << (m.certified ? "true" : "false") << ',' << fmt(nd_lattice) << ',' << fmt(nd_formula) << ',' << n_min << ','
          << fmt(pred) << ',' << (attains ? "true" : "false") << '\n';
      if (std::abs(nd_lattice - nd_formula) > 1e-8 * nd_formula)
        st.fail(f->name + "/" + I.label + ": lattice and closed-form Nd disagree");
      if (nd_formula > pred * (1.0 + 1e-9) && m.certified)
        st.fail(f->name + "/" + I.label + ": Nd exceeds the ideal-form prediction");
      const double floor = f->totally_real() ? 2.0 : std::sqrt(2.0);
      if (!I.principal && m.value < floor * (1.0 - 1e-12))
        st.fail(f->name + "/" + I.label + ": non-principal min(I) below " + fmt(floor));
    }
  }
  return st;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct TrialResult {
  bool nld_error = false;
  bool ml_error = false;
  bool dominance_violation = false;  // NLD correct but ML wrong
  double sphere_conditional = 0.0;   // fading: per-trial conditional sphere bound
  double noise_energy = 0.0;
  double max_codeword_energy = 0.0;
};

struct SimulationPoint {
  double snr_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t errors_nld = 0;
  std::uint64_t errors_ml = 0;
  std::uint64_t dominance_violations = 0;
  double pe_nld = NAN;
  double pe_ml = NAN;
  double mc_sigma = NAN;
  double sphere_bound = NAN;
  double chernoff_bound = NAN;
  double noise_power = 0.0;  // mean per real dimension
  std::size_t codebook_size = 0;
  double achieved_rate = 0.0;
};

/// Runs `trials` seeded trials against one codebook. Trial t draws its message
/// from (seed, t, message) and its channel from (seed, t, fading/noise), so the
/// same trial indices replay the same randomness at every SNR point.
inline SimulationPoint simulate_point(const FieldSpec& field, const Codebook& cb, double snr_db, const ExperimentConfig& c) {
  const ChannelModel model = c.model;
  const int n = cb.n;
  const bool run_nld = c.decoder != DecoderChoice::ml;
  const bool run_ml = c.decoder != DecoderChoice::nld;
  const double alpha = cb.alpha;
  const double sv = shortest_vector(embedding_matrix(field), c.enumeration).norm;

  std::vector<TrialResult> results(c.trials);
  auto work = [&](std::uint64_t begin, std::uint64_t stride) {
    for (std::uint64_t t = begin; t < c.trials; t += stride) {
      CounterRng msg(c.master_seed, t, Stream::message);
      const std::size_t idx = static_cast<std::size_t>(msg.below(cb.size()));
      const Eigen::VectorXd& s = cb.points[idx];
      auto [y, r] = transmit(s, model, c.master_seed, t);
      TrialResult& tr = results[t];
      tr.noise_energy = r.noise.squaredNorm();
      tr.max_codeword_energy = s.squaredNorm();
      bool nld_ok = false, ml_ok = false;
      if (run_nld) {
        nld_ok = nld_decode(y, r, cb, idx, c.enumeration).correct;
        tr.nld_error = !nld_ok;
      }
      if (run_ml) {
        ml_ok = ml_decode(y, r, cb, idx).correct;
        tr.ml_error = !ml_ok;
      }
      tr.dominance_violation = run_nld && run_ml && nld_ok && !ml_ok;
      if (is_fading(model)) {
        // d_h² >= α² n V_n since |Nr(x)| >= 1 on O_K.
        const double d_sq = alpha * alpha * n * geometric_mean_statistic(r);
        tr.sphere_conditional = sphere_bound(std::sqrt(d_sq), n, model);
      }
    }
  };

  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(c.workers, c.trials));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SimulationPoint pt;
  pt.snr_db = snr_db;
  pt.trials = c.trials;
  pt.codebook_size = cb.size();
  pt.achieved_rate = cb.achieved_rate;
  double sphere_sum = 0.0, noise_sum = 0.0;
  for (const auto& tr : results) {
    pt.errors_nld += tr.nld_error;
    pt.errors_ml += tr.ml_error;
    pt.dominance_violations += tr.dominance_violation;
    sphere_sum += tr.sphere_conditional;
    noise_sum += tr.noise_energy;
  }
  const double N = static_cast<double>(c.trials);
  const int real_dim = cb.lattice.dim();
  pt.noise_power = noise_sum / (N * real_dim);
  if (run_nld) pt.pe_nld = pt.errors_nld / N;
  if (run_ml) pt.pe_ml = pt.errors_ml / N;
  const double p = run_nld ? pt.pe_nld : pt.pe_ml;
  pt.mc_sigma = std::sqrt(p * (1.0 - p) / N);
  if (is_fading(model)) {
    pt.sphere_bound = sphere_sum / N;
    pt.chernoff_bound = fading_error_bound(n, alpha, std::nullopt, std::nullopt, model).bound;
  } else {
    pt.sphere_bound = sphere_bound(alpha * sv, n, model);
  }
  return pt;
}

inline RunStatus run_simulate(const ExperimentConfig& c, const std::vector<FieldSpec>& catalog, std::ostream& out,
                              std::vector<SimulationPoint>* points = nullptr) {
  RunStatus st;
  const FieldSpec& field = find_field(catalog, c.field_name);
  if (is_complex(c.model) == field.totally_real())
    throw ValidationError("model " + to_string(c.model) + " does not match the signature of field " + field.name);
  std::vector<SimulationPoint> pts;
  for (std::size_t i = 0; i < c.snr_db_grid.size(); ++i) {
    const double db = c.snr_db_grid[i];
    const Codebook cb = carve(CodeConfig{c.rate, db_to_power(db), &field, c.master_seed}, c.enumeration);
    for (const auto& s : cb.points)
      if (s.squaredNorm() > cb.n * cb.power * (1.0 + 1e-9)) st.fail("codeword outside the power ball");
    if (i == 0 && !c.codebook_path.empty()) {
      std::ofstream f(c.codebook_path);
      if (!f) throw ValidationError("cannot open " + c.codebook_path);
      write_codebook_csv(cb, f);
    }
    pts.push_back(simulate_point(field, cb, db, c));
  }

  // SNR = P requires unit noise power per real dimension (1/2 for complex models).
  double noise_sum = 0.0;
  for (const auto& pt : pts) noise_sum += pt.noise_power;
  const double noise_power = noise_sum / pts.size();
  const double expected = is_complex(c.model) ? 0.5 : 1.0;
  const double samples = static_cast<double>(c.trials) * pts.size() * embedding_matrix(field).dim();
  const double tolerance = 5.0 * expected * std::sqrt(2.0 / samples);
  const bool noise_ok = std::abs(noise_power - expected) <= tolerance;
  if (!noise_ok) st.fail("empirical noise power " + fmt(noise_power) + " != " + fmt(expected));

  for (const auto& pt : pts)
    out << "# snr_db=" << fmt(pt.snr_db) << " codebook_size=" << pt.codebook_size
        << " achieved_rate=" << fmt(pt.achieved_rate) << " dominance_violations=" << pt.dominance_violations << '\n';
  out << "# noise_power_per_real_dim=" << fmt(noise_power) << " expected=" << fmt(expected)
      << " tolerance=" << fmt(tolerance) << (noise_ok ? " ok" : " FAILED") << '\n';
  out << "snr_db,trials,errors_nld,errors_ml,pe_nld,pe_ml,mc_sigma,sphere_bound,chernoff_bound\n";
  const bool run_nld = c.decoder != DecoderChoice::ml;
  const bool run_ml = c.decoder != DecoderChoice::nld;
  for (const auto& pt : pts) {
    out << fmt(pt.snr_db) << ',' << pt.trials << ',' << (run_nld ? std::to_string(pt.errors_nld) : "NA") << ','
        << (run_ml ? std::to_string(pt.errors_ml) : "NA") << ',' << fmt(pt.pe_nld) << ',' << fmt(pt.pe_ml) << ','
        << fmt(pt.mc_sigma) << ',' << fmt(pt.sphere_bound) << ',' << fmt(pt.chernoff_bound) << '\n';
    if (pt.dominance_violations) st.fail("NLD correct while ML wrong at " + fmt(pt.snr_db) + " dB");
  }
  if (points) *points = std::move(pts);
  return st;
}

/// Writes the CSV for one configuration. Library errors propagate as exceptions.
inline RunStatus run_to_stream(const ExperimentConfig& c, const std::vector<FieldSpec>& catalog, std::ostream& out) {
  c.validate();
  std::ostringstream body;
  RunStatus st;
  switch (c.subcommand) {
    case Subcommand::invariants: st = run_invariants(c, catalog, body); break;
    case Subcommand::rates: st = run_rates(c, catalog, body); break;
    case Subcommand::bounds: st = run_bounds(c, body); break;
    case Subcommand::simulate: st = run_simulate(c, catalog, body); break;
    case Subcommand::ideal: st = run_ideal(c, catalog, body); break;
  }
  write_header(out, c);
  out << body.str();
  return st;
}

/// Exit status: 0 success, 1 validation failure, 2 error (unknown field,
/// infeasible rate, enumeration cap, bad input).
inline int run(const ExperimentConfig& c, const std::vector<FieldSpec>& catalog, std::ostream& err = std::cerr) {
  try {
    RunStatus st;
    if (c.output_path.empty()) {
      st = run_to_stream(c, catalog, std::cout);
    } else {
      std::ostringstream buf;
      st = run_to_stream(c, catalog, buf);
      std::ofstream f(c.output_path, std::ios::binary);
      if (!f) throw ValidationError("cannot open " + c.output_path);
      f << buf.str();
    }
    for (const auto& m : st.failures) err << "nflab: validation failed: " << m << '\n';
    return st.ok ? 0 : 1;
  } catch (const std::exception& e) {
    err << "nflab: error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace nflab
