#include <gtest/gtest.h>

#include <sstream>

#include "nflab/experiment.hpp"

namespace {

using namespace nflab;

const std::vector<FieldSpec>& catalog() {
  static const std::vector<FieldSpec> c = load_catalog(NFLAB_DEFAULT_CATALOG);
  return c;
}

std::string run_text(const ExperimentConfig& c, RunStatus* st = nullptr) {
  std::ostringstream out;
  const RunStatus s = run_to_stream(c, catalog(), out);
  if (st) *st = s;
  return out.str();
}

std::vector<std::string> data_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::vector<std::string> cells(const std::string& row) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const char ch = row[i];
    if (quoted && ch == '"' && i + 1 < row.size() && row[i + 1] == '"') {
      out.back() += '"';
      ++i;
    } else if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

TEST(Experiment, CsvQuoting) {
  EXPECT_EQ(csv_cell("plain"), "plain");
  EXPECT_EQ(csv_cell("<2,1+sqrt-5>"), "\"<2,1+sqrt-5>\"");
  EXPECT_EQ(cells(csv_cell("a\"b,c") + ",d"), (std::vector<std::string>{"a\"b,c", "d"}));
}

TEST(Experiment, HeaderRecordsConfig) {
  ExperimentConfig c;
  c.subcommand = Subcommand::bounds;
  c.master_seed = 123456789012345ull;
  c.snr_db_grid = {10, 20};
  const std::string text = run_text(c);
  EXPECT_EQ(text.rfind("# nflab 0.1.0\n", 0), 0u);
  EXPECT_NE(text.find("# seed=123456789012345\n"), std::string::npos);
  EXPECT_NE(text.find("# snr_db=10,20\n"), std::string::npos);
  EXPECT_NE(text.find("# subcommand=bounds\n"), std::string::npos);
  EXPECT_EQ(data_rows(text)[0], "label,channel,P_db,rate_bits,gap_bits,params");
  EXPECT_EQ(data_rows(text).size(), 1u + 2u * 12u);
}

TEST(Experiment, InvariantsRowForQsqrt2) {
  ExperimentConfig c;
  c.subcommand = Subcommand::invariants;
  c.field_name = "Qsqrt2";
  RunStatus st;
  const auto rows = data_rows(run_text(c, &st));
  ASSERT_EQ(rows.size(), 2u);
  const auto header = cells(rows[0]);
  const auto row = cells(rows[1]);
  auto col = [&](const std::string& name) {
    return row[std::find(header.begin(), header.end(), name) - header.begin()];
  };
  EXPECT_NEAR(std::stod(col("ndp")), 0.3535534, 1e-7);
  EXPECT_LE(std::stod(col("max_rel_mismatch")), 1e-8);
  EXPECT_EQ(col("dp_exact"), "true");
  EXPECT_TRUE(st.ok);
}

TEST(Experiment, InvariantsAllFieldsPass) {
  ExperimentConfig c;
  c.subcommand = Subcommand::invariants;
  RunStatus st;
  const auto rows = data_rows(run_text(c, &st));
  EXPECT_EQ(rows.size(), catalog().size() + 1);
  EXPECT_TRUE(st.ok);
}

TEST(Experiment, IdealQsqrtMinus5) {
  ExperimentConfig c;
  c.subcommand = Subcommand::ideal;
  c.field_name = "Qsqrt-5";
  RunStatus st;
  const auto rows = data_rows(run_text(c, &st));
  EXPECT_TRUE(st.ok);
  const auto header = cells(rows[0]);
  const auto min_col = std::find(header.begin(), header.end(), "min_I") - header.begin();
  bool saw_unit = false, saw_np = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto r = cells(rows[i]);
    if (r[1] == "O_K") {
      EXPECT_EQ(r[min_col], "1");
      saw_unit = true;
    }
    if (r[3] == "false") {
      EXPECT_NEAR(std::stod(r[min_col]), std::sqrt(2.0), 1e-9);
      saw_np = true;
    }
  }
  EXPECT_TRUE(saw_unit && saw_np);
}

TEST(Experiment, RatesIncludeAllModels) {
  ExperimentConfig c;
  c.subcommand = Subcommand::rates;
  c.snr_db_grid = {0, 20, 40};
  const std::string text = run_text(c);
  for (auto m : {"awgn_real", "awgn_complex", "rayleigh_real", "rayleigh_complex"})
    EXPECT_NE(text.find(std::string("martinet_") + m), std::string::npos);
  EXPECT_EQ(data_rows(text).size(), 1u + 3u * 8u);
}

ExperimentConfig small_sim() {
  ExperimentConfig c;
  c.subcommand = Subcommand::simulate;
  c.field_name = "Qsqrt5";
  c.rate = 1.0;
  c.snr_db_grid = {5, 10, 15};
  c.trials = 500;
  c.master_seed = 42;
  c.model = ChannelModel::rayleigh_real;
  return c;
}

TEST(Experiment, SimulateIsByteIdenticalAcrossWorkers) {
  ExperimentConfig c = small_sim();
  const std::string a = run_text(c);
  c.workers = 3;
  const std::string b = run_text(c);
  c.workers = 7;
  const std::string d = run_text(c);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
  c.master_seed = 43;
  EXPECT_NE(a, run_text(c));
}

TEST(Experiment, SimulateColumnsAndDominance) {
  RunStatus st;
  const auto rows = data_rows(run_text(small_sim(), &st));
  EXPECT_TRUE(st.ok);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "snr_db,trials,errors_nld,errors_ml,pe_nld,pe_ml,mc_sigma,sphere_bound,chernoff_bound");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto r = cells(rows[i]);
    EXPECT_LE(std::stoull(r[3]), std::stoull(r[2]));
  }
}

TEST(Experiment, SimulateSingleDecoder) {
  ExperimentConfig c = small_sim();
  c.decoder = DecoderChoice::ml;
  const auto rows = data_rows(run_text(c));
  EXPECT_EQ(cells(rows[1])[2], "NA");
  EXPECT_NE(cells(rows[1])[3], "NA");
}

TEST(Experiment, Errors) {
  ExperimentConfig c = small_sim();
  c.field_name = "nope";
  std::ostringstream err;
  EXPECT_EQ(run(c, catalog(), err), 2);
  EXPECT_NE(err.str().find("unknown field"), std::string::npos);

  c = small_sim();
  c.rate = 30.0;
  EXPECT_EQ(run(c, catalog(), err), 2);

  c = small_sim();
  c.enumeration.dim_cap = 1;
  EXPECT_EQ(run(c, catalog(), err), 2);

  c = small_sim();
  c.model = ChannelModel::awgn_complex;  // real field
  EXPECT_EQ(run(c, catalog(), err), 2);

  c = small_sim();
  c.snr_db_grid.clear();
  EXPECT_THROW(c.validate(), ValidationError);
  c = small_sim();
  c.trials = 0;
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Experiment, ParseEnums) {
  EXPECT_EQ(parse_subcommand("ideal"), Subcommand::ideal);
  EXPECT_EQ(parse_decoder("both"), DecoderChoice::both);
  EXPECT_THROW(parse_subcommand("plot"), ValidationError);
  EXPECT_THROW(parse_decoder("sphere"), ValidationError);
}

}  // namespace
