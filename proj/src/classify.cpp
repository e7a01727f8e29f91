// Copyright 2026 The asr-dcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "asr/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "asr/error.hpp"
#include "asr/fileutil.hpp"
#include "json.hpp"

namespace asr {

namespace {

using nlohmann::json;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void CheckDataset(const std::vector<FeatureVector>& x, std::size_t n_labels) {
  Require(x.size() == n_labels, "feature and label counts differ (" + std::to_string(x.size()) +
                                    " vs " + std::to_string(n_labels) + ")");
  Require(x.size() >= 2, "at least two training examples are required");
  const std::size_t d = x[0].size();
  Require(d > 0, "feature vectors are empty");
  for (const auto& v : x) {
    Require(v.size() == d, "inconsistent feature dimensions", ErrorCode::kMismatch);
    Require(v.fingerprint == x[0].fingerprint, "inconsistent feature fingerprints",
            ErrorCode::kMismatch);
  }
}

std::vector<double> ScaleRow(const MlpModel& m, const std::vector<double>& x) {
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - m.feature_mean[k]) / m.feature_std[k];
  return out;
}

// Returns the output pre-activation; hidden activations in h.
double Forward(const MlpModel& m, const double* x, std::vector<double>& h) {
  const int d = m.input_dim();
  const int hd = m.hidden_dim();
  h.resize(hd);
  double z2 = m.b2;
  for (int j = 0; j < hd; ++j) {
    const double* w = &m.w1(j, 0);
    double z = m.b1[j];
    for (int k = 0; k < d; ++k) z += w[k] * x[k];
    h[j] = Sigmoid(z);
    z2 += m.w2[j] * h[j];
  }
  return z2;
}

}  // namespace

MlpModel MlpModel::Zero(int input_dim, int hidden_dim) {
  Require(input_dim >= 1 && hidden_dim >= 1, "network dimensions must be positive");
  MlpModel m;
  m.layer_sizes = {input_dim, hidden_dim, 1};
  m.w1 = MatrixD(hidden_dim, input_dim, 0.0);
  m.b1.assign(hidden_dim, 0.0);
  m.w2.assign(hidden_dim, 0.0);
  m.feature_mean.assign(input_dim, 0.0);
  m.feature_std.assign(input_dim, 1.0);
  return m;
}

std::size_t MlpModel::ParameterCount() const {
  return w1.size() + b1.size() + w2.size() + 1;
}

std::vector<double> MlpModel::Parameters() const {
  std::vector<double> p(w1.data().begin(), w1.data().end());
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.push_back(b2);
  return p;
}

void MlpModel::SetParameters(const std::vector<double>& p) {
  Require(p.size() == ParameterCount(), "parameter vector has the wrong length");
  auto it = p.begin();
  std::copy(it, it + static_cast<long>(w1.size()), w1.data().begin());
  it += static_cast<long>(w1.size());
  std::copy(it, it + static_cast<long>(b1.size()), b1.begin());
  it += static_cast<long>(b1.size());
  std::copy(it, it + static_cast<long>(w2.size()), w2.begin());
  it += static_cast<long>(w2.size());
  b2 = *it;
}

void MlpModel::Validate() const {
  Require(layer_sizes.size() == 3 && layer_sizes[2] == 1, "network must be [D, H, 1]",
          ErrorCode::kValidation);
  const auto d = static_cast<std::size_t>(layer_sizes[0]);
  const auto h = static_cast<std::size_t>(layer_sizes[1]);
  Require(d >= 1 && h >= 1, "network dimensions must be positive", ErrorCode::kValidation);
  Require(w1.rows() == h && w1.cols() == d && b1.size() == h && w2.size() == h,
          "weight shapes do not match the layer sizes", ErrorCode::kValidation);
  Require(feature_mean.size() == d && feature_std.size() == d,
          "scaling statistics do not match the input dimension", ErrorCode::kValidation);
  for (double v : Parameters()) Require(std::isfinite(v), "non-finite weight", ErrorCode::kValidation);
  for (std::size_t k = 0; k < d; ++k) {
    Require(std::isfinite(feature_mean[k]) && std::isfinite(feature_std[k]) && feature_std[k] > 0,
            "invalid scaling statistics", ErrorCode::kValidation);
  }
}

double MlpLossAndGradient(const MlpModel& model, const MatrixD& x_scaled,
                          const std::vector<double>& targets,
                          const std::vector<double>& weights, double l2,
                          std::vector<double>* grad) {
  const std::size_t n = x_scaled.rows();
  const int d = model.input_dim();
  const int hd = model.hidden_dim();
  Require(x_scaled.cols() == static_cast<std::size_t>(d), "input dimension mismatch",
          ErrorCode::kMismatch);
  Require(targets.size() == n && weights.size() == n, "target/weight count mismatch");
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  Require(wsum > 0, "example weights must have positive sum");

  std::vector<double> gw1, gb1, gw2;
  double gb2 = 0.0;
  if (grad) {
    gw1.assign(static_cast<std::size_t>(hd) * d, 0.0);
    gb1.assign(hd, 0.0);
    gw2.assign(hd, 0.0);
  }
  double loss = 0.0;
  std::vector<double> h;
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = &x_scaled(i, 0);
    const double z2 = Forward(model, x, h);
    const double wi = weights[i] / wsum;
    loss += wi * (Softplus(z2) - targets[i] * z2);
    if (!grad) continue;
    const double dz2 = wi * (Sigmoid(z2) - targets[i]);
    gb2 += dz2;
    for (int j = 0; j < hd; ++j) {
      gw2[j] += dz2 * h[j];
      const double dz1 = dz2 * model.w2[j] * h[j] * (1.0 - h[j]);
      gb1[j] += dz1;
      double* g = &gw1[static_cast<std::size_t>(j) * d];
      for (int k = 0; k < d; ++k) g[k] += dz1 * x[k];
    }
  }
  double sq = 0.0;
  for (double w : model.w1.data()) sq += w * w;
  for (double w : model.w2) sq += w * w;
  loss += 0.5 * l2 * sq;
  if (grad) {
    for (std::size_t k = 0; k < gw1.size(); ++k) gw1[k] += l2 * model.w1.data()[k];
    for (int j = 0; j < hd; ++j) gw2[j] += l2 * model.w2[j];
    grad->clear();
    grad->insert(grad->end(), gw1.begin(), gw1.end());
    grad->insert(grad->end(), gb1.begin(), gb1.end());
    grad->insert(grad->end(), gw2.begin(), gw2.end());
    grad->push_back(gb2);
  }
  return loss;
}

MlpModel MlpFit(const std::vector<FeatureVector>& x, const std::vector<double>& targets,
                const std::vector<double>& weights, const MlpConfig& config,
                MlpTrainTrace* trace) {
  CheckDataset(x, targets.size());
  Require(config.hidden >= 1, "hidden layer size must be positive");
  Require(config.epochs >= 0, "epoch count must be nonnegative");
  Require(config.lr > 0 && std::isfinite(config.lr), "learning rate must be positive");
  Require(config.l2 >= 0, "l2 penalty must be nonnegative");
  for (double t : targets) Require(t >= 0 && t <= 1, "targets must lie in [0, 1]");
  Require(weights.empty() || weights.size() == x.size(), "weight count mismatch");
  const std::size_t n = x.size();
  const int d = static_cast<int>(x[0].size());

  MlpModel m = MlpModel::Zero(d, config.hidden);
  m.fingerprint = x[0].fingerprint;
  for (int k = 0; k < d; ++k) {
    double mean = 0.0;
    for (const auto& v : x) mean += v.values[k];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& v : x) var += (v.values[k] - mean) * (v.values[k] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    m.feature_mean[k] = mean;
    m.feature_std[k] = sd > 1e-12 ? sd : 1.0;
  }
  MatrixD xs(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ScaleRow(m, x[i].values);
    std::copy(row.begin(), row.end(), &xs(i, 0));
  }

  std::mt19937_64 rng(config.seed);
  const double r1 = std::sqrt(6.0 / (d + config.hidden));
  const double r2 = std::sqrt(6.0 / (config.hidden + 1));
  std::uniform_real_distribution<double> u1(-r1, r1), u2(-r2, r2);
  for (double& w : m.w1.data()) w = u1(rng);
  for (double& w : m.w2) w = u2(rng);

  const std::vector<double> wts = weights.empty() ? std::vector<double>(n, 1.0) : weights;
  std::vector<double> params = m.Parameters();
  std::vector<double> grad;
  if (trace) trace->loss.clear();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double loss = MlpLossAndGradient(m, xs, targets, wts, config.l2, &grad);
    if (trace) trace->loss.push_back(loss);
    for (std::size_t k = 0; k < params.size(); ++k) params[k] -= config.lr * grad[k];
    m.SetParameters(params);
  }
  m.Validate();
  return m;
}

MlpModel MlpTrain(const std::vector<FeatureVector>& x, const std::vector<int>& y,
                  const MlpConfig& config, MlpTrainTrace* trace) {
  CheckDataset(x, y.size());
  std::size_t pos = 0;
  for (int label : y) {
    Require(label == 0 || label == 1, "MLP labels must be 0 or 1");
    pos += label == 1 ? 1 : 0;
  }
  Require(pos > 0 && pos < y.size(), "both classes must be present", ErrorCode::kDegenerate);
  std::vector<double> targets(y.begin(), y.end());
  std::vector<double> weights(y.size(), 1.0);
  if (config.balance_classes) {
    const double n = static_cast<double>(y.size());
    const double wp = n / (2.0 * static_cast<double>(pos));
    const double wn = n / (2.0 * static_cast<double>(y.size() - pos));
    for (std::size_t i = 0; i < y.size(); ++i) weights[i] = y[i] == 1 ? wp : wn;
  }
  return MlpFit(x, targets, weights, config, trace);
}

double MlpPredictRaw(const MlpModel& model, const std::vector<double>& x) {
  Require(x.size() == static_cast<std::size_t>(model.input_dim()),
          "feature dimension " + std::to_string(x.size()) + " does not match model input " +
              std::to_string(model.input_dim()),
          ErrorCode::kMismatch);
  const auto xs = ScaleRow(model, x);
  std::vector<double> h;
  return Sigmoid(Forward(model, xs.data(), h));
}

double MlpPredict(const MlpModel& model, const FeatureVector& x) {
  return MlpPredictRaw(model, x.values);
}

void AdaBoostModel::Validate() const {
  Require(input_dim >= 1, "AdaBoost input dimension must be positive", ErrorCode::kValidation);
  for (const Stump& s : rounds) {
    Require(s.feature >= 0 && s.feature < input_dim, "stump feature index out of range",
            ErrorCode::kValidation);
    Require(s.polarity == 1 || s.polarity == -1, "stump polarity must be +1 or -1",
            ErrorCode::kValidation);
    Require(std::isfinite(s.alpha) && std::isfinite(s.threshold), "non-finite stump parameter",
            ErrorCode::kValidation);
  }
}

AdaBoostModel AdaBoostTrain(const std::vector<FeatureVector>& x, const std::vector<int>& y,
                            const AdaBoostConfig& config, AdaBoostTrace* trace) {
  CheckDataset(x, y.size());
  Require(config.rounds >= 1, "AdaBoost needs at least one round");
  const std::size_t n = x.size();
  const std::size_t d = x[0].size();
  std::size_t pos = 0;
  for (int label : y) {
    Require(label == 1 || label == -1, "AdaBoost labels must be -1 or +1");
    pos += label == 1 ? 1 : 0;
  }
  Require(pos > 0 && pos < n, "both classes must be present", ErrorCode::kDegenerate);

  // Sorted order and distinct-value boundaries per feature, computed once.
  std::vector<std::vector<std::uint32_t>> order(d);
  bool any_split = false;
  for (std::size_t k = 0; k < d; ++k) {
    auto& o = order[k];
    o.resize(n);
    std::iota(o.begin(), o.end(), 0u);
    std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) {
      return x[a].values[k] < x[b].values[k];
    });
    any_split |= x[o.front()].values[k] < x[o.back()].values[k];
  }
  Require(any_split, "every feature is constant; no stump can split the data",
          ErrorCode::kDegenerate);

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = config.balance_classes
               ? 0.5 / static_cast<double>(y[i] == 1 ? pos : n - pos)
               : 1.0 / static_cast<double>(n);
  }

  AdaBoostModel model;
  model.input_dim = static_cast<int>(d);
  model.fingerprint = x[0].fingerprint;
  if (trace) trace->rounds.clear();
  for (int round = 0; round < config.rounds; ++round) {
    double best_err = 2.0;
    Stump best;
    for (std::size_t k = 0; k < d; ++k) {
      const auto& o = order[k];
      // err_plus(thr): x<=thr with y=+1 plus x>thr with y=-1.
      double err_plus = 0.0;
      for (std::size_t i = 0; i < n; ++i) err_plus += y[i] == -1 ? w[i] : 0.0;
      for (std::size_t s = 0; s + 1 < n; ++s) {
        const std::uint32_t i = o[s];
        err_plus += y[i] == 1 ? w[i] : -w[i];
        const double a = x[i].values[k];
        const double b = x[o[s + 1]].values[k];
        if (!(a < b)) continue;
        const double thr = a + (b - a) / 2.0;
        const double err_minus = 1.0 - err_plus;
        if (err_plus < best_err) {
          best_err = err_plus;
          best = {static_cast<int>(k), thr, 1, 0.0};
        }
        if (err_minus < best_err) {
          best_err = err_minus;
          best = {static_cast<int>(k), thr, -1, 0.0};
        }
      }
    }
    best_err = std::max(best_err, 0.0);
    if (best_err >= 0.5) break;
    const bool perfect = best_err <= 0.0;
    const double eps = perfect ? 1e-10 : best_err;
    best.alpha = 0.5 * std::log((1.0 - eps) / eps);
    model.rounds.push_back(best);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::exp(-best.alpha * y[i] * best.Vote(x[i].values[best.feature]));
      total += w[i];
    }
    for (double& wi : w) wi /= total;
    if (trace) trace->rounds.push_back({best_err, w});
    if (perfect) break;
  }
  Require(!model.rounds.empty(), "no stump beats chance on the training data",
          ErrorCode::kDegenerate);
  return model;
}

double AdaBoostPredictRaw(const AdaBoostModel& model, const std::vector<double>& x) {
  Require(x.size() == static_cast<std::size_t>(model.input_dim),
          "feature dimension " + std::to_string(x.size()) + " does not match model input " +
              std::to_string(model.input_dim),
          ErrorCode::kMismatch);
  double margin = 0.0;
  for (const Stump& s : model.rounds) margin += s.alpha * s.Vote(x[s.feature]);
  return margin;
}

double AdaBoostPredict(const AdaBoostModel& model, const FeatureVector& x) {
  return AdaBoostPredictRaw(model, x.values);
}

const std::string& Classifier::fingerprint() const {
  return kind == Kind::kAdaBoost ? adaboost.fingerprint : mlp.fingerprint;
}

double Classifier::Score(const FeatureVector& x) const {
  if (x.fingerprint != fingerprint()) {
    Fail(ErrorCode::kMismatch, "feature scheme '" + x.fingerprint +
                                   "' does not match the model's '" + fingerprint() + "'");
  }
  switch (kind) {
    case Kind::kMlp:
      return MlpPredict(mlp, x);
    case Kind::kAdaBoost:
      return AdaBoostPredict(adaboost, x);
    case Kind::kFusion:
      return score_min + (score_max - score_min) * MlpPredict(mlp, x);
  }
  return 0.0;
}

namespace {

constexpr int kModelVersion = 1;

const char* KindName(Classifier::Kind k) {
  switch (k) {
    case Classifier::Kind::kMlp: return "mlp";
    case Classifier::Kind::kAdaBoost: return "adaboost";
    case Classifier::Kind::kFusion: return "fusion";
  }
  return "mlp";
}

}  // namespace

std::string ClassifierToJson(const Classifier& model) {
  json j;
  j["format"] = "asr-classifier";
  j["version"] = kModelVersion;
  j["kind"] = KindName(model.kind);
  j["fingerprint"] = model.fingerprint();
  j["threshold"] = model.threshold;
  if (model.kind == Classifier::Kind::kAdaBoost) {
    json rounds = json::array();
    for (const Stump& s : model.adaboost.rounds) {
      rounds.push_back({{"feature", s.feature}, {"threshold", s.threshold},
                        {"polarity", s.polarity}, {"alpha", s.alpha}});
    }
    j["adaboost"] = {{"input_dim", model.adaboost.input_dim}, {"rounds", rounds}};
  } else {
    const MlpModel& m = model.mlp;
    json w1 = json::array();
    for (std::size_t r = 0; r < m.w1.rows(); ++r) {
      w1.push_back(std::vector<double>(m.w1.row(r).begin(), m.w1.row(r).end()));
    }
    j["mlp"] = {{"layer_sizes", m.layer_sizes}, {"w1", w1}, {"b1", m.b1}, {"w2", m.w2},
                {"b2", m.b2}, {"feature_mean", m.feature_mean}, {"feature_std", m.feature_std}};
    if (model.kind == Classifier::Kind::kFusion) {
      j["score_min"] = model.score_min;
      j["score_max"] = model.score_max;
    }
  }
  return j.dump(1) + "\n";
}

Classifier ClassifierFromJson(const std::string& text) {
  Classifier c;
  try {
    const json j = json::parse(text);
    Require(j.value("format", "") == "asr-classifier", "not a classifier model file",
            ErrorCode::kParse);
    const int version = j.at("version").get<int>();
    Require(version == kModelVersion, "unsupported model version " + std::to_string(version),
            ErrorCode::kUnsupported);
    const std::string kind = j.at("kind").get<std::string>();
    const std::string fp = j.at("fingerprint").get<std::string>();
    c.threshold = j.at("threshold").get<double>();
    if (kind == "adaboost") {
      c.kind = Classifier::Kind::kAdaBoost;
      const json& a = j.at("adaboost");
      c.adaboost.input_dim = a.at("input_dim").get<int>();
      c.adaboost.fingerprint = fp;
      for (const json& s : a.at("rounds")) {
        c.adaboost.rounds.push_back({s.at("feature").get<int>(), s.at("threshold").get<double>(),
                                     s.at("polarity").get<int>(), s.at("alpha").get<double>()});
      }
      c.adaboost.Validate();
    } else if (kind == "mlp" || kind == "fusion") {
      c.kind = kind == "mlp" ? Classifier::Kind::kMlp : Classifier::Kind::kFusion;
      const json& m = j.at("mlp");
      MlpModel& mm = c.mlp;
      mm.layer_sizes = m.at("layer_sizes").get<std::vector<int>>();
      Require(mm.layer_sizes.size() == 3 && mm.layer_sizes[0] >= 1 && mm.layer_sizes[1] >= 1,
              "network must be [D, H, 1]", ErrorCode::kValidation);
      const auto rows = m.at("w1").get<std::vector<std::vector<double>>>();
      mm.w1 = MatrixD(mm.layer_sizes[1], mm.layer_sizes[0]);
      Require(rows.size() == mm.w1.rows(), "w1 row count mismatch", ErrorCode::kValidation);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        Require(rows[r].size() == mm.w1.cols(), "w1 column count mismatch",
                ErrorCode::kValidation);
        std::copy(rows[r].begin(), rows[r].end(), mm.w1.row(r).begin());
      }
      mm.b1 = m.at("b1").get<std::vector<double>>();
      mm.w2 = m.at("w2").get<std::vector<double>>();
      mm.b2 = m.at("b2").get<double>();
      mm.feature_mean = m.at("feature_mean").get<std::vector<double>>();
      mm.feature_std = m.at("feature_std").get<std::vector<double>>();
      mm.fingerprint = fp;
      mm.Validate();
      if (c.kind == Classifier::Kind::kFusion) {
        c.score_min = j.at("score_min").get<double>();
        c.score_max = j.at("score_max").get<double>();
        Require(c.score_min < c.score_max, "score range is empty", ErrorCode::kValidation);
      }
    } else {
      Fail(ErrorCode::kUnsupported, "unknown model kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("malformed model file: ") + e.what());
  }
  return c;
}

Classifier LoadClassifier(const std::string& path) {
  try {
    return ClassifierFromJson(ReadTextFile(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotFound || e.code() == ErrorCode::kIo) throw;
    Fail(e.code(), path + ": " + e.what());
  }
}

void SaveClassifier(const std::string& path, const Classifier& model) {
  AtomicWriteFile(path, ClassifierToJson(model));
}

}  // namespace asr
