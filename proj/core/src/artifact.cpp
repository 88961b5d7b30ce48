#include "enetlts/artifact.hpp"

#include <fstream>

#include <json.hpp>

#include "enetlts/errors.hpp"
#include "enetlts/version.hpp"

namespace enetlts {
namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  return v;
}

}  // namespace

void ModelArtifact::save(const std::string& path) const {
  json j;
  j["format_version"] = kArtifactFormatVersion;
  j["library_version"] = kVersion;
  j["family"] = fit.family == Family::Gaussian ? "gaussian" : "binomial";
  j["response"] = response_name;
  j["features"] = feature_names;
  j["n_train"] = n_train;
  j["h"] = h;
  j["seed"] = seed;
  j["alpha_opt"] = fit.alpha_opt;
  j["lambda_opt"] = fit.lambda_opt;
  j["lambda_upd"] = fit.lambda_upd;
  j["intercept_raw"] = fit.intercept_raw;
  j["beta_raw"] = vec_to_json(fit.beta_raw);
  j["intercept_rew"] = fit.intercept_rew;
  j["beta_rew"] = vec_to_json(fit.beta_rew);
  j["best_subset"] = fit.best_subset;
  j["weights"] = fit.weights;
  j["n_w"] = fit.n_w;
  j["reweight_ok"] = fit.reweight_ok;
  j["standardizer"] = {{"center", vec_to_json(scaler.center)},
                       {"scale", vec_to_json(scaler.scale)},
                       {"y_center", scaler.y_center}};
  json surface = json::array();
  for (const auto& cell : fit.cv_surface) {
    surface.push_back({{"alpha", cell.alpha},
                       {"lambda", cell.lambda},
                       {"value", cell.value}});
  }
  j["cv_surface"] = surface;

  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw Error("failed writing '" + path + "'");
}

ModelArtifact ModelArtifact::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not a valid model artifact: " +
                          e.what());
  }
  ModelArtifact a;
  try {
    a.format_version = j.at("format_version").get<int>();
    if (a.format_version != kArtifactFormatVersion) {
      throw ValidationError("'" + path + "': unsupported artifact format version " +
                            std::to_string(a.format_version));
    }
    a.library_version = j.at("library_version").get<std::string>();
    a.fit.family = j.at("family").get<std::string>() == "gaussian"
                       ? Family::Gaussian
                       : Family::Binomial;
    a.response_name = j.at("response").get<std::string>();
    a.feature_names = j.at("features").get<std::vector<std::string>>();
    a.n_train = j.at("n_train").get<int>();
    a.h = j.at("h").get<int>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.fit.alpha_opt = j.at("alpha_opt").get<double>();
    a.fit.lambda_opt = j.at("lambda_opt").get<double>();
    a.fit.lambda_upd = j.at("lambda_upd").get<double>();
    a.fit.intercept_raw = j.at("intercept_raw").get<double>();
    a.fit.beta_raw = vec_from_json(j.at("beta_raw"));
    a.fit.intercept_rew = j.at("intercept_rew").get<double>();
    a.fit.beta_rew = vec_from_json(j.at("beta_rew"));
    a.fit.best_subset = j.at("best_subset").get<std::vector<int>>();
    a.fit.weights = j.at("weights").get<std::vector<int>>();
    a.fit.n_w = j.at("n_w").get<int>();
    a.fit.reweight_ok = j.at("reweight_ok").get<bool>();
    const json& s = j.at("standardizer");
    a.scaler.center = vec_from_json(s.at("center"));
    a.scaler.scale = vec_from_json(s.at("scale"));
    a.scaler.y_center = s.at("y_center").get<double>();
    for (const auto& cell : j.at("cv_surface")) {
      a.fit.cv_surface.push_back({cell.at("alpha").get<double>(),
                                  cell.at("lambda").get<double>(),
                                  cell.at("value").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is missing artifact fields: " +
                          e.what());
  }
  return a;
}

void ModelArtifact::check_features(const std::vector<std::string>& columns) const {
  if (columns.size() != feature_names.size()) {
    throw ValidationError("prediction input has " + std::to_string(columns.size()) +
                          " feature columns, model expects " +
                          std::to_string(feature_names.size()));
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] != feature_names[i]) {
      throw ValidationError("feature column " + std::to_string(i) + " is '" +
                            columns[i] + "', model expects '" + feature_names[i] +
                            "'");
    }
  }
}

}  // namespace enetlts
