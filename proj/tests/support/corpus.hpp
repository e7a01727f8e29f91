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

#ifndef ASR_TESTS_CORPUS_HPP_
#define ASR_TESTS_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "asr/synth.hpp"

namespace asr::testing {

struct FmCorpusOptions {
  double duration_s = 1800.0;
  int n_calls = 200;
  double snr_lo_db = 10.0;
  double snr_hi_db = 20.0;
  NoiseKind noise = NoiseKind::kWhite;
  double noise_level = 0.05;
  // Narrowband tones mixed in at random times.
  int n_interferers = 0;
  double interferer_snr_db = 15.0;
  std::uint64_t seed = 1;
};

// Up-calls in evenly sized slots with random jitter, so calls never overlap.
SceneSpec FmCorpus(const FmCorpusOptions& options);

struct PtCorpusOptions {
  double duration_s = 600.0;
  int n_trains = 20;
  int n_distractors = 40;
  double snr_lo_db = 10.0;
  double snr_hi_db = 20.0;
  // Distractor pulses keep at least this far from every train.
  double clearance_s = 3.0;
  std::uint64_t seed = 1;
};

SceneSpec PtCorpus(const PtCorpusOptions& options);

struct GradedScene {
  SceneSpec spec;
  // Quality grade 0..4 per scene event; 0 marks non-target trains.
  std::vector<int> grades;
};

struct FusionCorpusOptions {
  double duration_s = 1800.0;
  int n_trains = 60;
  // Every n-th train is a non-target train in a higher band.
  int non_target_every = 8;
  std::uint64_t seed = 1;
};

// Pulse trains whose SNR is drawn from a disjoint stratum per grade, so the
// planted SNR alone determines the grade.
GradedScene FusionCorpus(const FusionCorpusOptions& options);

// SNR stratum [lo, hi] in dB for grades 1..4.
std::pair<double, double> GradeSnrRange(int grade);

std::string TempPath(const std::string& name);

}  // namespace asr::testing

#endif  // ASR_TESTS_CORPUS_HPP_
