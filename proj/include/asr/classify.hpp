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

#ifndef ASR_CLASSIFY_HPP_
#define ASR_CLASSIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "asr/feature_vector.hpp"
#include "asr/matrix.hpp"

namespace asr {

// Single-hidden-layer perceptron with logistic units throughout.
struct MlpModel {
  std::vector<int> layer_sizes;  // {D, H, 1}
  MatrixD w1;                    // H x D
  std::vector<double> b1;        // H
  std::vector<double> w2;        // H (single output)
  double b2 = 0.0;
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  std::string fingerprint;

  int input_dim() const { return layer_sizes.empty() ? 0 : layer_sizes[0]; }
  int hidden_dim() const { return layer_sizes.size() < 2 ? 0 : layer_sizes[1]; }

  // All-zero parameters, identity scaling.
  static MlpModel Zero(int input_dim, int hidden_dim);

  std::size_t ParameterCount() const;
  std::vector<double> Parameters() const;
  void SetParameters(const std::vector<double>& params);
  void Validate() const;
};

struct MlpConfig {
  int hidden = 12;
  double lr = 0.5;
  int epochs = 2000;
  double l2 = 1e-4;
  std::uint64_t seed = 1;
  // Inverse-frequency example weights so both classes carry equal mass.
  bool balance_classes = true;
};

struct MlpTrainTrace {
  std::vector<double> loss;  // one value per epoch, before the update
};

// Weighted cross-entropy + l2/2 * |weights|^2 over already-scaled inputs.
// Gradient is returned in Parameters() order.
double MlpLossAndGradient(const MlpModel& model, const MatrixD& x_scaled,
                          const std::vector<double>& targets,
                          const std::vector<double>& weights, double l2,
                          std::vector<double>* grad);

// Labels in {0, 1}; both classes must be present.
MlpModel MlpTrain(const std::vector<FeatureVector>& x,
                  const std::vector<int>& y, const MlpConfig& config,
                  MlpTrainTrace* trace = nullptr);

// Soft targets in [0, 1] with optional per-example weights (empty = uniform).
// Used directly for score regression.
MlpModel MlpFit(const std::vector<FeatureVector>& x,
                const std::vector<double>& targets,
                const std::vector<double>& weights, const MlpConfig& config,
                MlpTrainTrace* trace = nullptr);

double MlpPredict(const MlpModel& model, const FeatureVector& x);
double MlpPredictRaw(const MlpModel& model, const std::vector<double>& x);

struct Stump {
  int feature = 0;
  double threshold = 0.0;
  int polarity = 1;  // +1: x > threshold votes +1
  double alpha = 0.0;

  int Vote(double x) const { return x > threshold ? polarity : -polarity; }
};

struct AdaBoostModel {
  std::vector<Stump> rounds;
  int input_dim = 0;
  std::string fingerprint;
  void Validate() const;
};

struct AdaBoostRoundInfo {
  double weighted_error = 0.0;
  // Example weights after this round's update.
  std::vector<double> weights_after;
};

struct AdaBoostTrace {
  std::vector<AdaBoostRoundInfo> rounds;
};

struct AdaBoostConfig {
  int rounds = 100;
  bool balance_classes = true;
};

// Labels in {-1, +1}.
AdaBoostModel AdaBoostTrain(const std::vector<FeatureVector>& x,
                            const std::vector<int>& y,
                            const AdaBoostConfig& config,
                            AdaBoostTrace* trace = nullptr);

// Sum of alpha_t * stump_t(x).
double AdaBoostPredict(const AdaBoostModel& model, const FeatureVector& x);
double AdaBoostPredictRaw(const AdaBoostModel& model,
                          const std::vector<double>& x);

// A serialized classifier of either kind with its decision threshold.
struct Classifier {
  enum class Kind { kMlp, kAdaBoost, kFusion } kind = Kind::kMlp;
  MlpModel mlp;
  AdaBoostModel adaboost;
  // Score at or above which a candidate is reported.
  double threshold = 0.5;
  // For fusion models: predictions are mapped to [score_min, score_max].
  double score_min = 0.0;
  double score_max = 4.0;

  const std::string& fingerprint() const;
  // Refuses vectors with a different fingerprint.
  double Score(const FeatureVector& x) const;
};

std::string ClassifierToJson(const Classifier& model);
Classifier ClassifierFromJson(const std::string& text);
Classifier LoadClassifier(const std::string& path);
void SaveClassifier(const std::string& path, const Classifier& model);

}  // namespace asr

#endif  // ASR_CLASSIFY_HPP_
