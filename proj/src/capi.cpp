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

#include "asr/asr.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <set>
#include <string>

#include "asr/audio_io.hpp"
#include "asr/classify.hpp"
#include "asr/detector.hpp"
#include "asr/engine.hpp"
#include "asr/error.hpp"
#include "asr/eval.hpp"
#include "asr/events.hpp"
#include "asr/fileutil.hpp"
#include "asr/fusion.hpp"
#include "asr/plot.hpp"
#include "asr/synth.hpp"
#include "json.hpp"

struct asr_clip {
  asr::AudioClip clip;
};

struct asr_events {
  std::vector<asr::DetectionEvent> events;
};

struct asr_model {
  asr::Classifier model;
};

struct asr_trainset {
  asr::TrainingSet set;
};

namespace {

thread_local std::string g_last_error;

asr_status ToStatus(asr::ErrorCode code) {
  switch (code) {
    case asr::ErrorCode::kInvalidArgument: return ASR_E_INVALID_ARGUMENT;
    case asr::ErrorCode::kNotFound: return ASR_E_NOT_FOUND;
    case asr::ErrorCode::kIo: return ASR_E_IO;
    case asr::ErrorCode::kParse: return ASR_E_PARSE;
    case asr::ErrorCode::kUnsupported: return ASR_E_UNSUPPORTED;
    case asr::ErrorCode::kTruncated: return ASR_E_TRUNCATED;
    case asr::ErrorCode::kValidation: return ASR_E_VALIDATION;
    case asr::ErrorCode::kMismatch: return ASR_E_MISMATCH;
    case asr::ErrorCode::kDegenerate: return ASR_E_DEGENERATE;
  }
  return ASR_E_INTERNAL;
}

template <typename F>
asr_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return ASR_OK;
  } catch (const asr::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ASR_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ASR_E_INTERNAL;
  }
}

void NotNull(const void* p, const char* what) {
  asr::Require(p != nullptr, std::string(what) + " must not be null");
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::string Text(const char* s) { return s ? std::string(s) : std::string(); }

asr::MlpConfig ParseMlpConfig(const char* text) {
  asr::MlpConfig c;
  if (Text(text).empty()) return c;
  try {
    const auto j = nlohmann::json::parse(text);
    asr::Require(j.is_object(), "MLP configuration must be a JSON object", asr::ErrorCode::kParse);
    c.hidden = j.value("hidden", c.hidden);
    c.lr = j.value("lr", c.lr);
    c.epochs = j.value("epochs", c.epochs);
    c.l2 = j.value("l2", c.l2);
    c.seed = j.value("seed", c.seed);
    c.balance_classes = j.value("balance_classes", c.balance_classes);
  } catch (const nlohmann::json::exception& e) {
    asr::Fail(asr::ErrorCode::kParse, std::string("MLP configuration: ") + e.what());
  }
  return c;
}

asr::AdaBoostConfig ParseAdaBoostConfig(const char* text) {
  asr::AdaBoostConfig c;
  if (Text(text).empty()) return c;
  try {
    const auto j = nlohmann::json::parse(text);
    asr::Require(j.is_object(), "AdaBoost configuration must be a JSON object",
                 asr::ErrorCode::kParse);
    c.rounds = j.value("rounds", c.rounds);
    c.balance_classes = j.value("balance_classes", c.balance_classes);
  } catch (const nlohmann::json::exception& e) {
    asr::Fail(asr::ErrorCode::kParse, std::string("AdaBoost configuration: ") + e.what());
  }
  return c;
}

asr::MatchOptions Match(double min_overlap, bool freq = false) {
  asr::MatchOptions o;
  o.min_time_overlap_frac = min_overlap;
  o.require_freq_overlap = freq;
  return o;
}

}  // namespace

extern "C" {

const char* asr_version(void) { return "0.1.0"; }

const char* asr_status_name(asr_status status) {
  switch (status) {
    case ASR_OK: return "ok";
    case ASR_E_INVALID_ARGUMENT: return "invalid_argument";
    case ASR_E_NOT_FOUND: return "not_found";
    case ASR_E_IO: return "io";
    case ASR_E_PARSE: return "parse";
    case ASR_E_UNSUPPORTED: return "unsupported";
    case ASR_E_TRUNCATED: return "truncated";
    case ASR_E_VALIDATION: return "validation";
    case ASR_E_MISMATCH: return "mismatch";
    case ASR_E_DEGENERATE: return "degenerate";
    case ASR_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* asr_last_error(void) { return g_last_error.c_str(); }

void asr_string_free(char* s) { std::free(s); }

asr_status asr_clip_read_wav(const char* path, int channel, asr_clip** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    auto clips = asr::ReadWav(path);
    asr::Require(channel >= 0 && static_cast<std::size_t>(channel) < clips.size(),
                 "channel " + std::to_string(channel) + " not present in " + path +
                     " (" + std::to_string(clips.size()) + " channels)");
    *out = new asr_clip{std::move(clips[static_cast<std::size_t>(channel)])};
  });
}

asr_status asr_clip_from_samples(const double* samples, size_t n, double sample_rate_hz,
                                 const char* channel_id, double start_time_s, asr_clip** out) {
  return Guard([&] {
    NotNull(samples, "samples");
    NotNull(out, "out");
    asr::AudioClip c;
    c.samples.assign(samples, samples + n);
    c.sample_rate_hz = sample_rate_hz;
    c.channel_id = Text(channel_id);
    c.start_time_s = start_time_s;
    asr::ValidateClip(c);
    *out = new asr_clip{std::move(c)};
  });
}

size_t asr_clip_length(const asr_clip* clip) { return clip ? clip->clip.samples.size() : 0; }

double asr_clip_sample_rate(const asr_clip* clip) { return clip ? clip->clip.sample_rate_hz : 0.0; }

const double* asr_clip_samples(const asr_clip* clip) {
  return clip ? clip->clip.samples.data() : nullptr;
}

asr_status asr_clip_write_wav(const asr_clip* clip, const char* path, int float32) {
  return Guard([&] {
    NotNull(clip, "clip");
    NotNull(path, "path");
    asr::WriteWav(path, clip->clip, float32 ? asr::WavEncoding::kFloat32 : asr::WavEncoding::kPcm16);
  });
}

asr_status asr_clip_set_channel_id(asr_clip* clip, const char* channel_id) {
  return Guard([&] {
    NotNull(clip, "clip");
    NotNull(channel_id, "channel_id");
    asr::Require(channel_id[0] != '\0', "channel_id must not be empty");
    clip->clip.channel_id = channel_id;
  });
}

void asr_clip_free(asr_clip* clip) { delete clip; }

asr_status asr_synth_render(const char* scene_json, long long seed, asr_clip** clip_out,
                            asr_events** truth_out) {
  return Guard([&] {
    NotNull(scene_json, "scene_json");
    NotNull(clip_out, "clip_out");
    asr::SceneSpec spec = asr::ParseSceneSpec(scene_json);
    if (seed >= 0) spec.rng_seed = static_cast<std::uint64_t>(seed);
    asr::RenderedScene scene = asr::RenderScene(spec);
    auto* clip = new asr_clip{std::move(scene.clip)};
    if (truth_out) {
      try {
        *truth_out = new asr_events{std::move(scene.truth)};
      } catch (...) {
        delete clip;
        throw;
      }
    }
    *clip_out = clip;
  });
}

asr_status asr_events_new(asr_events** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = new asr_events{};
  });
}

asr_status asr_events_read_tsv(const char* path, asr_events** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new asr_events{asr::ReadEventsTsv(path)};
  });
}

asr_status asr_events_parse_tsv(const char* text, asr_events** out) {
  return Guard([&] {
    NotNull(text, "text");
    NotNull(out, "out");
    *out = new asr_events{asr::EventsFromTsv(text)};
  });
}

asr_status asr_events_write_tsv(const asr_events* events, const char* path) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(path, "path");
    asr::WriteEventsTsv(path, events->events);
  });
}

asr_status asr_events_to_tsv(const asr_events* events, char** out) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(out, "out");
    *out = Dup(asr::EventsToTsv(events->events));
  });
}

asr_status asr_events_to_jsonl(const asr_events* events, char** out) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(out, "out");
    *out = Dup(asr::EventsToJsonLines(events->events));
  });
}

size_t asr_events_count(const asr_events* events) { return events ? events->events.size() : 0; }

asr_status asr_events_get(const asr_events* events, size_t index, asr_event_info* info) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(info, "info");
    asr::Require(index < events->events.size(), "event index out of range");
    const asr::DetectionEvent& e = events->events[index];
    info->id = e.id.c_str();
    info->channel_id = e.channel_id.c_str();
    info->kind = e.kind.c_str();
    info->source = e.source.c_str();
    info->t0_s = e.t0_s;
    info->t1_s = e.t1_s;
    info->f_lo_hz = e.f_lo_hz;
    info->f_hi_hz = e.f_hi_hz;
    info->score = e.score;
    info->has_features = e.features.has_value() ? 1 : 0;
    info->has_predicted_score = e.predicted_score.has_value() ? 1 : 0;
    info->predicted_score = e.predicted_score.value_or(0.0);
  });
}

asr_status asr_events_append(asr_events* dst, const asr_events* src) {
  return Guard([&] {
    NotNull(dst, "dst");
    NotNull(src, "src");
    const auto copy = src->events;
    dst->events.insert(dst->events.end(), copy.begin(), copy.end());
  });
}

asr_status asr_events_canonicalize(asr_events* events) {
  return Guard([&] {
    NotNull(events, "events");
    asr::CanonicalizeEvents(events->events);
  });
}

asr_status asr_events_set_channel(asr_events* events, const char* channel_id) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(channel_id, "channel_id");
    asr::Require(channel_id[0] != '\0', "channel_id must not be empty");
    for (auto& e : events->events) e.channel_id = channel_id;
  });
}

void asr_events_free(asr_events* events) { delete events; }

asr_status asr_detect(const char* pipeline, const char* params_json, const asr_model* model,
                      double threshold, const asr_clip* clip, asr_events** out) {
  return Guard([&] {
    NotNull(pipeline, "pipeline");
    NotNull(clip, "clip");
    NotNull(out, "out");
    std::optional<asr::Classifier> m;
    if (model) m = model->model;
    const auto p = asr::MakePipeline(pipeline, Text(params_json), std::move(m), threshold);
    auto events = p->Run(clip->clip);
    asr::CanonicalizeEvents(events);
    *out = new asr_events{std::move(events)};
  });
}

asr_status asr_model_load(const char* path, asr_model** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = new asr_model{asr::LoadClassifier(path)};
  });
}

asr_status asr_model_save(const asr_model* model, const char* path) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(path, "path");
    asr::SaveClassifier(path, model->model);
  });
}

asr_status asr_model_to_json(const asr_model* model, char** out) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(out, "out");
    *out = Dup(asr::ClassifierToJson(model->model));
  });
}

const char* asr_model_kind(const asr_model* model) {
  if (!model) return "";
  switch (model->model.kind) {
    case asr::Classifier::Kind::kMlp: return "mlp";
    case asr::Classifier::Kind::kAdaBoost: return "adaboost";
    case asr::Classifier::Kind::kFusion: return "fusion";
  }
  return "";
}

const char* asr_model_fingerprint(const asr_model* model) {
  return model ? model->model.fingerprint().c_str() : "";
}

double asr_model_threshold(const asr_model* model) { return model ? model->model.threshold : 0.0; }

void asr_model_free(asr_model* model) { delete model; }

asr_status asr_trainset_new(asr_trainset** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = new asr_trainset{};
  });
}

asr_status asr_trainset_harvest_fm(asr_trainset* set, const char* fm_params_json,
                                   const asr_clip* clip, const asr_events* truth,
                                   double positive_overlap, int random_negatives,
                                   unsigned long long seed) {
  return Guard([&] {
    NotNull(set, "set");
    NotNull(clip, "clip");
    NotNull(truth, "truth");
    const asr::FmDetector det(asr::FmConfigFromJson(Text(fm_params_json)));
    asr::HarvestOptions opt;
    opt.positive_overlap = positive_overlap;
    opt.random_negatives = random_negatives;
    opt.seed = seed;
    std::vector<asr::DetectionEvent> same_channel;
    for (const auto& t : truth->events) {
      if (t.channel_id == clip->clip.channel_id) same_channel.push_back(t);
    }
    asr::TrainingSet added;
    asr::HarvestFm(det, clip->clip, same_channel, opt, &added);
    if (!set->set.x.empty() && !added.x.empty()) {
      asr::Require(added.x[0].fingerprint == set->set.x[0].fingerprint,
                   "feature scheme differs from the examples already collected",
                   asr::ErrorCode::kMismatch);
    }
    set->set.x.insert(set->set.x.end(), added.x.begin(), added.x.end());
    set->set.y.insert(set->set.y.end(), added.y.begin(), added.y.end());
  });
}

asr_status asr_trainset_add_detections(asr_trainset* set, const asr_events* detections,
                                       const asr_events* truth, double min_overlap) {
  return Guard([&] {
    NotNull(set, "set");
    NotNull(detections, "detections");
    NotNull(truth, "truth");
    const auto m = asr::MatchEvents(detections->events, truth->events, Match(min_overlap));
    for (std::size_t i = 0; i < detections->events.size(); ++i) {
      const auto& ev = detections->events[i];
      asr::Require(ev.features.has_value(), "detection " + ev.id + " carries no features");
      if (!set->set.x.empty()) {
        asr::Require(ev.features->fingerprint == set->set.x[0].fingerprint,
                     "feature scheme differs from the examples already collected",
                     asr::ErrorCode::kMismatch);
      }
      set->set.x.push_back(*ev.features);
      set->set.y.push_back(m.det_to_truth[i] >= 0 ? 1 : 0);
    }
  });
}

size_t asr_trainset_positives(const asr_trainset* set) { return set ? set->set.positives() : 0; }

size_t asr_trainset_negatives(const asr_trainset* set) { return set ? set->set.negatives() : 0; }

asr_status asr_trainset_to_csv(const asr_trainset* set, char** out) {
  return Guard([&] {
    NotNull(set, "set");
    NotNull(out, "out");
    std::string s = "# fingerprint=" + (set->set.x.empty() ? std::string() : set->set.x[0].fingerprint) + "\n";
    s += "label";
    const std::size_t d = set->set.x.empty() ? 0 : set->set.x[0].size();
    for (std::size_t k = 0; k < d; ++k) s += ",f" + std::to_string(k);
    s += "\n";
    for (std::size_t i = 0; i < set->set.x.size(); ++i) {
      s += std::to_string(set->set.y[i]);
      for (double v : set->set.x[i].values) s += "," + asr::FormatDouble(v);
      s += "\n";
    }
    *out = Dup(s);
  });
}

asr_status asr_train_mlp(const asr_trainset* set, const char* config_json, asr_model** out) {
  return Guard([&] {
    NotNull(set, "set");
    NotNull(out, "out");
    asr::Classifier c;
    c.kind = asr::Classifier::Kind::kMlp;
    c.mlp = asr::MlpTrain(set->set.x, set->set.y, ParseMlpConfig(config_json));
    c.threshold = 0.5;
    *out = new asr_model{std::move(c)};
  });
}

asr_status asr_train_adaboost(const asr_trainset* set, const char* config_json, asr_model** out) {
  return Guard([&] {
    NotNull(set, "set");
    NotNull(out, "out");
    std::vector<int> y;
    for (int v : set->set.y) y.push_back(v == 1 ? 1 : -1);
    asr::Classifier c;
    c.kind = asr::Classifier::Kind::kAdaBoost;
    c.adaboost = asr::AdaBoostTrain(set->set.x, y, ParseAdaBoostConfig(config_json));
    c.threshold = 0.0;
    *out = new asr_model{std::move(c)};
  });
}

void asr_trainset_free(asr_trainset* set) { delete set; }

asr_status asr_fusion_train(const asr_events* events, const char* scores_tsv,
                            const char* config_json, asr_model** out) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(scores_tsv, "scores_tsv");
    NotNull(out, "out");
    std::set<std::string> ids;
    for (const auto& e : events->events) ids.insert(e.id);
    const auto scores = asr::ParseScores(scores_tsv, &ids);
    *out = new asr_model{
        asr::FusionTrain(events->events, asr::ConsensusScores(scores), ParseMlpConfig(config_json))};
  });
}

asr_status asr_fusion_filter(const asr_events* events, const asr_model* model, double min_score,
                             asr_events** out) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(model, "model");
    NotNull(out, "out");
    *out = new asr_events{asr::ScoreFilter(events->events, model->model, min_score)};
  });
}

asr_status asr_eval_match(const asr_events* dets, const asr_events* truth, double min_overlap,
                          int require_freq_overlap, asr_match_counts* out) {
  return Guard([&] {
    NotNull(dets, "dets");
    NotNull(truth, "truth");
    NotNull(out, "out");
    const auto m =
        asr::MatchEvents(dets->events, truth->events, Match(min_overlap, require_freq_overlap != 0));
    out->tp = m.tp;
    out->fp = m.fp;
    out->fn = m.fn;
  });
}

asr_status asr_eval_metrics_json(const asr_events* dets, const asr_events* truth,
                                 double min_overlap, double hours, long long negative_windows,
                                 char** out) {
  return Guard([&] {
    NotNull(dets, "dets");
    NotNull(truth, "truth");
    NotNull(out, "out");
    const auto m = asr::MatchEvents(dets->events, truth->events, Match(min_overlap));
    std::optional<long long> nw;
    if (negative_windows > 0) nw = negative_windows;
    *out = Dup(asr::MetricsToJson(asr::ComputeMetrics(m.tp, m.fp, m.fn, hours, nw)));
  });
}

asr_status asr_pr_curve_csv(const asr_events* dets, const asr_events* truth, double min_overlap,
                            char** csv, double* average_precision) {
  return Guard([&] {
    NotNull(dets, "dets");
    NotNull(truth, "truth");
    const auto curve = asr::PrCurve(dets->events, truth->events, Match(min_overlap));
    if (average_precision) *average_precision = asr::AveragePrecision(curve);
    if (csv) *csv = Dup(asr::PrCurveToCsv(curve));
  });
}

asr_status asr_pr_curve_svg(const asr_events* const* dets, const char* const* names, size_t n,
                            const asr_events* truth, double min_overlap, const char* title,
                            char** svg) {
  return Guard([&] {
    NotNull(truth, "truth");
    NotNull(svg, "svg");
    asr::Require(n == 0 || (dets != nullptr && names != nullptr), "curve arrays must not be null");
    std::vector<asr::NamedCurve> curves;
    for (size_t i = 0; i < n; ++i) {
      NotNull(dets[i], "detection set");
      curves.push_back({Text(names[i]), asr::PrCurve(dets[i]->events, truth->events,
                                                     Match(min_overlap))});
    }
    *svg = Dup(asr::PrCurveSvg(curves, Text(title)));
  });
}

asr_status asr_percent_difference(long long a, long long b, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = asr::PercentDifference(a, b);
  });
}

asr_status asr_diel(const asr_events* events, const char* epoch, const char* first_day,
                    const char* last_day, int bin_minutes, char** csv, char** svg,
                    long long* dropped) {
  return Guard([&] {
    NotNull(events, "events");
    NotNull(epoch, "epoch");
    NotNull(first_day, "first_day");
    NotNull(last_day, "last_day");
    const auto d = asr::DielAggregate(events->events, epoch, first_day, last_day, bin_minutes);
    char* c = csv ? Dup(asr::DielToCsv(d)) : nullptr;
    if (svg) {
      try {
        *svg = Dup(asr::DielSvg(d, "Detections by day and time of day"));
      } catch (...) {
        std::free(c);
        throw;
      }
    }
    if (csv) *csv = c;
    if (dropped) *dropped = d.dropped;
  });
}

asr_status asr_format_date(const char* epoch, double offset_s, char** out) {
  return Guard([&] {
    NotNull(epoch, "epoch");
    NotNull(out, "out");
    const double t = asr::ParseIsoTimestamp(epoch) + offset_s;
    *out = Dup(asr::FormatDate(static_cast<long long>(std::floor(t / 86400.0))));
  });
}

asr_status asr_manifest_epoch(const char* manifest_path, char** out) {
  return Guard([&] {
    NotNull(manifest_path, "manifest_path");
    NotNull(out, "out");
    *out = Dup(asr::LoadManifest(manifest_path).epoch);
  });
}

asr_status asr_manifest_channel_hours(const char* manifest_path, double* out) {
  return Guard([&] {
    NotNull(manifest_path, "manifest_path");
    NotNull(out, "out");
    *out = asr::LoadManifest(manifest_path).channel_hours();
  });
}

asr_status asr_batch_run(const char* manifest_path, const char* run_config_json,
                         const char* config_dir, int workers, asr_events** events,
                         char** report_json) {
  return Guard([&] {
    NotNull(manifest_path, "manifest_path");
    NotNull(events, "events");
    const std::string cfg_text = Text(run_config_json).empty() ? "{}" : Text(run_config_json);
    asr::RunConfig cfg = asr::ParseRunConfig(cfg_text, Text(config_dir));
    if (workers > 0) cfg.workers = workers;
    const asr::ArchiveManifest manifest = asr::LoadManifest(manifest_path);
    std::optional<asr::Classifier> model;
    if (!cfg.model_path.empty()) model = asr::LoadClassifier(cfg.model_path);
    const auto pipeline = asr::MakePipeline(cfg.pipeline, cfg.params_json, std::move(model),
                                            cfg.threshold);
    const auto units =
        asr::Partition(manifest, cfg.unit_duration_s, cfg.overlap_s, pipeline->Fingerprint());
    asr::BatchOutput result = asr::RunBatch(units, cfg.workers, *pipeline);
    char* report = report_json ? Dup(asr::RunReportToJson(result.report)) : nullptr;
    try {
      *events = new asr_events{std::move(result.events)};
    } catch (...) {
      std::free(report);
      throw;
    }
    if (report_json) *report_json = report;
  });
}

}  // extern "C"
