#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "enetlts/commands.hpp"
#include "enetlts/version.hpp"

namespace {

void add_seed_option(CLI::App* cmd, enetlts::RunConfig& cfg) {
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&cfg](std::uint64_t v) {
           cfg.seed = v;
           cfg.seed_set = true;
         },
         "RNG seed (falls back to ENETLTS_SEED, then 1)");
}

void add_grid_options(CLI::App* cmd, enetlts::RunConfig& cfg) {
  cmd->add_option("--alphas", cfg.n_alphas, "number of alpha grid values")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lambdas", cfg.n_lambdas, "number of lambda grid values")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cv-folds", cfg.cv_folds, "cross-validation folds")
      ->check(CLI::Range(2, 1000));
  cmd->add_option("--cv-repeats", cfg.cv_repeats, "cross-validation repeats")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", cfg.threads,
                  "worker threads (0 = all cores; results are identical for "
                  "any thread count)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"enetlts - robust and sparse elastic net regression"};
  app.set_version_flag("--version", enetlts::kVersion);
  app.require_subcommand(1);

  enetlts::RunConfig cfg;

  CLI::App* fit = app.add_subcommand("fit", "fit a model to a CSV dataset");
  fit->add_option("--input", cfg.input, "training CSV")->required();
  fit->add_option("--output", cfg.output, "model artifact path")->required();
  fit->add_option("--response", cfg.response, "response column name");
  fit->add_option("--family", cfg.family, "gaussian or binomial");
  fit->add_option("--h-fraction", cfg.h_fraction,
                  "subset fraction, h = floor((n+1)*fraction)")
      ->check(CLI::Range(0.5, 1.0));
  fit->add_option("--h", cfg.h, "explicit subset size (overrides the fraction)");
  add_grid_options(fit, cfg);
  add_seed_option(fit, cfg);

  CLI::App* predict = app.add_subcommand("predict", "predict from a saved model");
  predict->add_option("--model", cfg.model, "model artifact path")->required();
  predict->add_option("--input", cfg.input, "CSV with feature columns")->required();
  predict->add_option("--output", cfg.output, "predictions CSV path")->required();
  predict->add_flag("--raw", cfg.raw_predictions,
                    "use the raw (unreweighted) coefficients");

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the sampling schemes and the study");
  simulate->add_option("--preset", cfg.preset,
                       "linear-low | linear-high | logistic-low | logistic-high")
      ->required();
  simulate->add_option("--contamination", cfg.contamination,
                       "contamination rate (0 or 0.1)")
      ->check(CLI::Range(0.0, 0.49));
  simulate->add_option("--replications", cfg.replications, "study replications")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--estimators", cfg.estimators,
                       "subset of: enet enet-lts-raw enet-lts");
  simulate->add_option("--metrics-out", cfg.output, "metrics CSV path");
  simulate->add_option("--train-out", cfg.train_out,
                       "write one generated training set to this CSV");
  simulate->add_option("--test-out", cfg.test_out,
                       "write the matching clean test set to this CSV");
  simulate->add_option("--test-n", cfg.test_n, "test set size (0 = train n)");
  add_grid_options(simulate, cfg);
  add_seed_option(simulate, cfg);

  CLI::App* bench = app.add_subcommand("bench", "time the fit stages");
  bench->add_option("--family", cfg.family, "gaussian or binomial");
  bench->add_option("--output", cfg.output, "timing CSV path")->required();
  bench->add_option("--n", cfg.bench_n, "observations")->check(CLI::PositiveNumber);
  bench->add_option("--p-ladder", cfg.p_ladder, "list of p values");
  bench->add_option("--replications", cfg.bench_reps, "repeats per p")
      ->check(CLI::PositiveNumber);
  bench->add_option("--grid-alphas", cfg.bench_alphas, "alpha grid size")
      ->check(CLI::PositiveNumber);
  bench->add_option("--grid-lambdas", cfg.bench_lambdas, "lambda grid size")
      ->check(CLI::PositiveNumber);
  bench->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  add_seed_option(bench, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return enetlts::run_command(cfg, std::cout, std::cerr);
}
