// nflab command-line front end.
//
//   nflab <invariants|rates|bounds|simulate|ideal> [--field F] [--rate R]
//         [--snr 0,5,10] [--trials N] [--seed S] [--decoder nld|ml|both]
//         [--model awgn_real|...] [--out path] [--config file] [--workers W]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nflab/experiment.hpp"

#ifndef NFLAB_DEFAULT_CATALOG
#define NFLAB_DEFAULT_CATALOG "data/catalog.txt"
#endif

namespace {

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw nflab::ValidationError("bad SNR value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw nflab::ValidationError("empty SNR grid");
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nflab::ValidationError("cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = nflab::detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw nflab::ParseError(lineno, "expected key=value in " + path);
    kv[nflab::detail::trim(line.substr(0, eq))] = nflab::detail::trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Number-field lattice codes: invariants, rates, bounds, simulation, ideals"};
  std::string subcommand, field, snr, decoder, model, out, config, catalog = NFLAB_DEFAULT_CATALOG, codebook_out;
  double rate = 0;
  std::uint64_t trials = 0, seed = 0;
  unsigned workers = 0;
  int dim_cap = 0;
  app.add_option("subcommand", subcommand, "invariants | rates | bounds | simulate | ideal")->required();
  auto* o_field = app.add_option("--field", field, "catalog field name");
  auto* o_rate = app.add_option("--rate", rate, "rate R in bits per (complex or real) coordinate");
  auto* o_snr = app.add_option("--snr", snr, "comma-separated SNR grid in dB");
  auto* o_trials = app.add_option("--trials", trials, "Monte Carlo trials per SNR point");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_decoder = app.add_option("--decoder", decoder, "nld | ml | both");
  auto* o_model = app.add_option("--model", model, "awgn_real | awgn_complex | rayleigh_real | rayleigh_complex");
  auto* o_out = app.add_option("--out", out, "output CSV (default stdout)");
  auto* o_workers = app.add_option("--workers", workers, "simulation worker threads");
  auto* o_cap = app.add_option("--dim-cap", dim_cap, "enumeration dimension cap");
  auto* o_cb = app.add_option("--codebook-out", codebook_out, "simulate: write the first grid point's codebook CSV");
  app.add_option("--config", config, "key=value file; flags override");
  app.add_option("--catalog", catalog, "field catalog path");
  CLI11_PARSE(app, argc, argv);

  nflab::ExperimentConfig c;
  try {
    c.subcommand = nflab::parse_subcommand(subcommand);
    if (!config.empty()) {
      for (const auto& [k, v] : read_config_file(config)) {
        if (k == "field") c.field_name = v;
        else if (k == "rate") c.rate = std::stod(v);
        else if (k == "snr" || k == "snr_db") c.snr_db_grid = parse_grid(v);
        else if (k == "trials") c.trials = std::stoull(v);
        else if (k == "seed") c.master_seed = std::stoull(v);
        else if (k == "decoder") c.decoder = nflab::parse_decoder(v);
        else if (k == "model") c.model = nflab::parse_channel_model(v);
        else if (k == "out") c.output_path = v;
        else if (k == "workers") c.workers = static_cast<unsigned>(std::stoul(v));
        else if (k == "dim_cap") c.enumeration.dim_cap = std::stoi(v);
        else if (k == "codebook_out") c.codebook_path = v;
        else if (k == "catalog") catalog = v;
        else throw nflab::ValidationError("unknown config key '" + k + "'");
      }
    }
    if (*o_field) c.field_name = field;
    if (*o_rate) c.rate = rate;
    if (*o_snr) c.snr_db_grid = parse_grid(snr);
    if (*o_trials) c.trials = trials;
    if (*o_seed) c.master_seed = seed;
    if (*o_decoder) c.decoder = nflab::parse_decoder(decoder);
    if (*o_model) c.model = nflab::parse_channel_model(model);
    if (*o_out) c.output_path = out;
    if (*o_workers) c.workers = workers;
    if (*o_cap) c.enumeration.dim_cap = dim_cap;
    if (*o_cb) c.codebook_path = codebook_out;
    const auto fields = nflab::load_catalog(catalog);
    return nflab::run(c, fields);
  } catch (const std::exception& e) {
    std::cerr << "nflab: error: " << e.what() << '\n';
    return 2;
  }
}
