#include "enetlts/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <ostream>
#include <thread>

#include "enetlts/artifact.hpp"
#include "enetlts/csv.hpp"
#include "enetlts/errors.hpp"
#include "enetlts/lts_linear.hpp"
#include "enetlts/simulation.hpp"
#include "enetlts/workflow.hpp"

namespace enetlts {
namespace {

Family parse_family(const std::string& name) {
  if (name == "gaussian") return Family::Gaussian;
  if (name == "binomial") return Family::Binomial;
  throw ValidationError("unknown family '" + name +
                        "' (expected gaussian or binomial)");
}

int effective_threads(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

FitConfig make_fit_config(const RunConfig& cfg) {
  FitConfig fc;
  fc.h = cfg.h;
  fc.h_fraction = cfg.h_fraction;
  fc.n_alphas = cfg.n_alphas;
  fc.n_lambdas = cfg.n_lambdas;
  fc.cv_folds = cfg.cv_folds;
  fc.cv_repeats = cfg.cv_repeats;
  fc.seed = resolve_seed(cfg);
  fc.threads = effective_threads(cfg);
  return fc;
}

bool looks_binary(const Eigen::VectorXd& y) {
  bool saw0 = false, saw1 = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) {
      saw0 = true;
    } else if (y[i] == 1.0) {
      saw1 = true;
    } else {
      return false;
    }
  }
  return saw0 && saw1;
}

SimScheme preset_scheme(const RunConfig& cfg) {
  SimScheme scheme;
  if (cfg.preset == "linear-low") {
    scheme = linear_scheme(150, 60);
  } else if (cfg.preset == "linear-high") {
    scheme = linear_scheme(50, 100);
  } else if (cfg.preset == "logistic-low") {
    scheme = logistic_scheme(150, 50);
  } else if (cfg.preset == "logistic-high") {
    scheme = logistic_scheme(50, 100);
  } else {
    throw ValidationError("unknown preset '" + cfg.preset +
                          "' (expected linear-low, linear-high, logistic-low or "
                          "logistic-high)");
  }
  scheme.contamination_rate = cfg.contamination;
  scheme.seed = resolve_seed(cfg);
  scheme.test_n = cfg.test_n;
  return scheme;
}

std::vector<Estimator> parse_estimators(const std::vector<std::string>& names) {
  std::vector<Estimator> out;
  for (const auto& name : names) {
    if (name == "enet") {
      out.push_back(Estimator::Enet);
    } else if (name == "enet-lts-raw") {
      out.push_back(Estimator::EnetLtsRaw);
    } else if (name == "enet-lts") {
      out.push_back(Estimator::EnetLtsReweighted);
    } else {
      throw ValidationError("unknown estimator '" + name +
                            "' (expected enet, enet-lts-raw or enet-lts)");
    }
  }
  return out;
}

std::vector<std::string> default_feature_names(int p) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (int j = 1; j <= p; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

std::uint64_t hash_fit(const ModelFit& fit) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(fit.alpha_opt);
  mix(fit.lambda_opt);
  mix(fit.lambda_upd);
  mix(fit.intercept_raw);
  mix(fit.intercept_rew);
  for (Eigen::Index j = 0; j < fit.beta_raw.size(); ++j) mix(fit.beta_raw[j]);
  for (Eigen::Index j = 0; j < fit.beta_rew.size(); ++j) mix(fit.beta_rew[j]);
  return h;
}

}  // namespace

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed_set) return cfg.seed;
  if (const char* env = std::getenv("ENETLTS_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && end != env) {
      return static_cast<std::uint64_t>(v);
    }
    throw ValidationError("ENETLTS_SEED is set but not a number: '" +
                          std::string(env) + "'");
  }
  return 1;
}

void cmd_fit(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw ValidationError("fit: --input is required");
  if (cfg.output.empty()) throw ValidationError("fit: --output is required");
  const Family family = parse_family(cfg.family);
  const LoadedDataset loaded = load_dataset_csv(cfg.input, cfg.response, family);
  if (family == Family::Gaussian && looks_binary(loaded.data.y)) {
    throw ValidationError(
        "fit: response column '" + cfg.response +
        "' holds only 0/1 labels; use --family binomial for a binary response");
  }
  const FitConfig fc = make_fit_config(cfg);
  const ModelFit fit = fit_enet_lts(loaded.data, fc);

  ModelArtifact artifact;
  artifact.fit = fit;
  artifact.scaler = robust_standardize(loaded.data).second;
  artifact.feature_names = loaded.feature_names;
  artifact.response_name = loaded.response_name;
  artifact.n_train = loaded.data.n();
  artifact.h = resolve_h(loaded.data.n(), fc);
  artifact.seed = fc.seed;
  artifact.save(cfg.output);

  const auto nonzero = [](const Eigen::VectorXd& b) {
    int k = 0;
    for (Eigen::Index j = 0; j < b.size(); ++j) k += b[j] != 0.0 ? 1 : 0;
    return k;
  };
  out << "family: " << cfg.family << "\n"
      << "n: " << loaded.data.n() << "  p: " << loaded.data.p()
      << "  h: " << artifact.h << "\n"
      << "alpha_opt: " << fit.alpha_opt << "\n"
      << "lambda_opt: " << fit.lambda_opt << "\n"
      << "lambda_upd: " << fit.lambda_upd << "\n"
      << "nonzero_raw: " << nonzero(fit.beta_raw) << "\n"
      << "nonzero_reweighted: " << nonzero(fit.beta_rew) << "\n";
  out << "outlier_rows:";
  for (std::size_t i = 0; i < fit.weights.size(); ++i) {
    if (fit.weights[i] == 0) out << " " << i;
  }
  out << "\n";
  if (!fit.reweight_ok) {
    out << "note: reweighting step failed, raw fit reported for both\n";
  }
  out << "model written to " << cfg.output << "\n";
}

void cmd_predict(const RunConfig& cfg, std::ostream& out) {
  if (cfg.model.empty()) throw ValidationError("predict: --model is required");
  if (cfg.input.empty()) throw ValidationError("predict: --input is required");
  if (cfg.output.empty()) throw ValidationError("predict: --output is required");
  const ModelArtifact artifact = ModelArtifact::load(cfg.model);
  CsvTable table = read_numeric_csv(cfg.input);

  // A training-style file may carry the response column; drop it if present.
  std::vector<std::string> columns = table.columns;
  Eigen::MatrixXd X = table.values;
  const auto it =
      std::find(columns.begin(), columns.end(), artifact.response_name);
  if (it != columns.end() &&
      columns.size() == artifact.feature_names.size() + 1) {
    const auto drop = static_cast<Eigen::Index>(it - columns.begin());
    Eigen::MatrixXd keep(X.rows(), X.cols() - 1);
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (j == drop) continue;
      keep.col(k++) = X.col(j);
    }
    X = std::move(keep);
    columns.erase(it);
  }
  artifact.check_features(columns);
  if (!X.allFinite()) {
    throw ValidationError(cfg.input + ": non-finite entries in prediction input");
  }

  const bool reweighted = !cfg.raw_predictions;
  if (artifact.fit.family == Family::Gaussian) {
    const Eigen::VectorXd pred = predict_linear(artifact.fit, X, reweighted);
    write_numeric_csv(cfg.output, {"prediction"}, pred);
  } else {
    const Eigen::VectorXd pi = predict_prob(artifact.fit, X, reweighted);
    Eigen::MatrixXd values(pi.size(), 2);
    values.col(0) = pi;
    for (Eigen::Index i = 0; i < pi.size(); ++i) {
      values(i, 1) = pi[i] > 0.5 ? 1.0 : 0.0;
    }
    write_numeric_csv(cfg.output, {"pi", "label"}, values);
  }
  out << "predictions written to " << cfg.output << "\n";
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const SimScheme scheme = preset_scheme(cfg);
  const bool emits_data = !cfg.train_out.empty() || !cfg.test_out.empty();
  if (emits_data) {
    const GeneratedData gen = scheme.family == Family::Gaussian
                                  ? gen_linear(scheme, 0)
                                  : gen_logistic(scheme, 0);
    const auto names = default_feature_names(scheme.p);
    if (!cfg.train_out.empty()) {
      write_dataset_csv(cfg.train_out, gen.train, names, "y");
      out << "train data written to " << cfg.train_out << "\n";
    }
    if (!cfg.test_out.empty()) {
      write_dataset_csv(cfg.test_out, gen.test, names, "y");
      out << "test data written to " << cfg.test_out << "\n";
    }
  }
  if (cfg.output.empty()) {
    if (!emits_data) {
      throw ValidationError(
          "simulate: nothing to do; pass --metrics-out and/or --train-out/--test-out");
    }
    return;
  }
  StudyOptions opt;
  opt.replications = cfg.replications;
  opt.estimators = parse_estimators(cfg.estimators);
  opt.fit = make_fit_config(cfg);
  opt.fit.threads = 1;
  opt.threads = effective_threads(cfg);
  const std::vector<MetricsRow> rows = run_study(scheme, opt);

  std::ofstream file(cfg.output);
  if (!file) throw ValidationError("cannot open '" + cfg.output + "' for writing");
  file << "replication,estimator,metric,value\n";
  for (const auto& row : rows) {
    file << row.replication << "," << row.estimator << "," << row.metric << ","
         << format_double(row.value) << "\n";
  }
  out << "metrics for " << rows.size() << " rows written to " << cfg.output
      << "\n";
}

void cmd_bench(const RunConfig& cfg, std::ostream& out) {
  if (cfg.output.empty()) throw ValidationError("bench: --output is required");
  const Family family = parse_family(cfg.family);
  std::ofstream file(cfg.output);
  if (!file) throw ValidationError("cannot open '" + cfg.output + "' for writing");
  file << "n,p,stage,seconds,result_hash\n";
  const std::uint64_t seed = resolve_seed(cfg);
  for (int p : cfg.p_ladder) {
    StageTimings mean;
    std::uint64_t hash = 0;
    for (int rep = 0; rep < cfg.bench_reps; ++rep) {
      SimScheme scheme = family == Family::Gaussian
                             ? linear_scheme(cfg.bench_n, p)
                             : logistic_scheme(cfg.bench_n, p);
      scheme.seed = seed;
      const GeneratedData gen =
          family == Family::Gaussian
              ? gen_linear(scheme, static_cast<std::uint64_t>(rep))
              : gen_logistic(scheme, static_cast<std::uint64_t>(rep));
      FitConfig fc = make_fit_config(cfg);
      fc.n_alphas = cfg.bench_alphas;
      fc.n_lambdas = cfg.bench_lambdas;
      StageTimings t;
      const ModelFit fit = fit_enet_lts(gen.train, fc, &t);
      mean.elemental += t.elemental;
      mean.grid += t.grid;
      mean.cv += t.cv;
      mean.reweight += t.reweight;
      mean.total += t.total;
      hash ^= hash_fit(fit);
    }
    const double r = std::max(1, cfg.bench_reps);
    const auto emit = [&](const char* stage, double seconds) {
      file << cfg.bench_n << "," << p << "," << stage << ","
           << format_double(seconds / r) << "," << hash << "\n";
    };
    emit("elemental", mean.elemental);
    emit("grid", mean.grid);
    emit("cv", mean.cv);
    emit("reweight", mean.reweight);
    emit("total", mean.total);
  }
  out << "timings written to " << cfg.output << "\n";
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "fit") {
      cmd_fit(cfg, out);
    } else if (cfg.command == "predict") {
      cmd_predict(cfg, out);
    } else if (cfg.command == "simulate") {
      cmd_simulate(cfg, out);
    } else if (cfg.command == "bench") {
      cmd_bench(cfg, out);
    } else {
      throw ValidationError("unknown command '" + cfg.command + "'");
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace enetlts
