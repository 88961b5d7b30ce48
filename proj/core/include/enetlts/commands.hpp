#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace enetlts {

/// Everything the command line front end can ask for. Invalid combinations
/// are rejected by the individual commands with ValidationError.
struct RunConfig {
  std::string command;  // fit | predict | simulate | bench

  std::string input;   // CSV path (fit, predict)
  std::string output;  // artifact path (fit), CSV path otherwise
  std::string model;   // artifact path (predict)
  std::string response = "y";
  std::string family = "gaussian";

  double h_fraction = 0.75;
  int h = 0;  // 0: use the fraction
  int n_alphas = 41;
  int n_lambdas = 40;
  int cv_folds = 5;
  int cv_repeats = 5;

  bool seed_set = false;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: all hardware threads
  bool raw_predictions = false;

  // simulate
  std::string preset;  // linear-low | linear-high | logistic-low | logistic-high
  double contamination = 0.0;
  int replications = 100;
  std::vector<std::string> estimators = {"enet", "enet-lts-raw", "enet-lts"};
  std::string train_out;
  std::string test_out;
  int test_n = 0;

  // bench
  std::vector<int> p_ladder = {50, 100, 200};
  int bench_n = 150;
  int bench_reps = 1;
  int bench_alphas = 5;
  int bench_lambdas = 5;
};

/// Seed precedence: --seed flag, then ENETLTS_SEED, then 1.
std::uint64_t resolve_seed(const RunConfig& cfg);

void cmd_fit(const RunConfig& cfg, std::ostream& out);
void cmd_predict(const RunConfig& cfg, std::ostream& out);
void cmd_simulate(const RunConfig& cfg, std::ostream& out);
void cmd_bench(const RunConfig& cfg, std::ostream& out);

/// Dispatch and map errors to exit codes: 0 success, 2 validation error,
/// 1 runtime failure.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace enetlts
