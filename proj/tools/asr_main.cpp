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

// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

#include "CLI11.hpp"
#include "asr/asr.h"

namespace {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(asr_status s) {
  if (s != ASR_OK) {
    throw DomainError(std::string(asr_status_name(s)) + ": " + asr_last_error());
  }
}

struct ClipFree {
  void operator()(asr_clip* p) const { asr_clip_free(p); }
};
struct EventsFree {
  void operator()(asr_events* p) const { asr_events_free(p); }
};
struct ModelFree {
  void operator()(asr_model* p) const { asr_model_free(p); }
};
struct TrainsetFree {
  void operator()(asr_trainset* p) const { asr_trainset_free(p); }
};
struct StringFree {
  void operator()(char* p) const { asr_string_free(p); }
};
using Clip = std::unique_ptr<asr_clip, ClipFree>;
using Events = std::unique_ptr<asr_events, EventsFree>;
using Model = std::unique_ptr<asr_model, ModelFree>;
using Trainset = std::unique_ptr<asr_trainset, TrainsetFree>;
using CString = std::unique_ptr<char, StringFree>;

std::string Take(char* s) {
  CString owned(s);
  return owned ? std::string(owned.get()) : std::string();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot write " + path);
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw DomainError("cannot write " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw DomainError("cannot write " + path + ": " + ec.message());
  }
}

void Emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    WriteFileAtomic(out_path, content);
  }
}

Events LoadEvents(const std::string& path) {
  asr_events* e = nullptr;
  Check(asr_events_read_tsv(path.c_str(), &e));
  return Events(e);
}

Model LoadModel(const std::string& path) {
  asr_model* m = nullptr;
  Check(asr_model_load(path.c_str(), &m));
  return Model(m);
}

Clip LoadClip(const std::string& path, int channel) {
  asr_clip* c = nullptr;
  Check(asr_clip_read_wav(path.c_str(), channel, &c));
  return Clip(c);
}

void WriteEvents(const asr_events* events, const std::string& out_path, bool jsonl) {
  char* text = nullptr;
  Check(jsonl ? asr_events_to_jsonl(events, &text) : asr_events_to_tsv(events, &text));
  Emit(out_path, Take(text));
}

std::string FormatNumber(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Globals {
  long long seed = -1;
  std::string config;
  std::string out;
  int workers = 0;
  bool verbose = false;
};

void Log(const Globals& g, const std::string& msg) {
  if (g.verbose) std::cerr << "asr: " << msg << "\n";
}

std::string ConfigText(const Globals& g) { return g.config.empty() ? std::string() : ReadFile(g.config); }

// ---- synth ----

struct SynthArgs {
  std::string scene;
  std::string truth;
  bool float32 = false;
};

void RunSynth(const Globals& g, const SynthArgs& a) {
  if (g.out.empty()) throw CLI::ValidationError("--out", "synth needs --out <wav>");
  const std::string scene = ReadFile(a.scene);
  asr_clip* clip = nullptr;
  asr_events* truth = nullptr;
  Check(asr_synth_render(scene.c_str(), g.seed, &clip, &truth));
  Clip c(clip);
  Events t(truth);
  Check(asr_clip_write_wav(c.get(), g.out.c_str(), a.float32 ? 1 : 0));
  if (!a.truth.empty()) Check(asr_events_write_tsv(t.get(), a.truth.c_str()));
  Log(g, "wrote " + g.out + " (" + std::to_string(asr_clip_length(c.get())) + " samples, " +
             std::to_string(asr_events_count(t.get())) + " events)");
}

// ---- detect ----

struct DetectArgs {
  std::string input;
  std::string branch = "cra";
  std::string model;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  bool all = false;
  int channel = 0;
  std::string channel_id;
  bool jsonl = false;
};

void RunDetect(const Globals& g, const DetectArgs& a, const std::string& pipeline) {
  Clip clip = LoadClip(a.input, a.channel);
  if (!a.channel_id.empty()) Check(asr_clip_set_channel_id(clip.get(), a.channel_id.c_str()));
  Model model;
  if (!a.model.empty()) model = LoadModel(a.model);
  double threshold = a.threshold;
  if (a.all) {
    threshold = -std::numeric_limits<double>::infinity();
  } else if (std::isnan(threshold)) {
    threshold = model ? asr_model_threshold(model.get()) : -std::numeric_limits<double>::infinity();
  }
  const std::string params = ConfigText(g);
  asr_events* ev = nullptr;
  Check(asr_detect(pipeline.c_str(), params.c_str(), model.get(), threshold, clip.get(), &ev));
  Events events(ev);
  WriteEvents(events.get(), g.out, a.jsonl);
  Log(g, std::to_string(asr_events_count(events.get())) + " detections");
}

// ---- train ----

struct TrainArgs {
  std::string model = "mlp";
  std::string detector;
  std::vector<std::string> wavs;
  std::vector<std::string> truths;
  std::string train_config;
  int random_negatives = 0;
  double overlap = 0.5;
  std::string features_csv;
  std::string dets;
  std::string scores;
};

void RunTrain(const Globals& g, const TrainArgs& a) {
  if (g.out.empty()) throw CLI::ValidationError("--out", "train needs --out <model.json>");
  std::string hyper = a.train_config.empty() ? std::string() : ReadFile(a.train_config);
  if (g.seed >= 0) {
    // Splice the global seed into the hyper-parameter object.
    std::string body = hyper;
    const auto open = body.find('{');
    if (open == std::string::npos) {
      body = "{\"seed\": " + std::to_string(g.seed) + "}";
    } else if (body.find("\"seed\"") == std::string::npos) {
      const auto close = body.find_first_not_of(" \t\r\n", open + 1);
      const bool empty = close != std::string::npos && body[close] == '}';
      body.insert(open + 1, "\"seed\": " + std::to_string(g.seed) + (empty ? "" : ","));
    }
    hyper = body;
  }
  asr_model* out = nullptr;
  if (a.model == "fusion") {
    if (a.dets.empty() || a.scores.empty()) {
      throw CLI::ValidationError("--dets/--scores", "fusion training needs --dets and --scores");
    }
    Events dets = LoadEvents(a.dets);
    const std::string scores = ReadFile(a.scores);
    Check(asr_fusion_train(dets.get(), scores.c_str(), hyper.c_str(), &out));
  } else {
    if (a.wavs.empty() || a.wavs.size() != a.truths.size()) {
      throw CLI::ValidationError("--wav/--truth", "give one --truth per --wav");
    }
    const std::string detector =
        !a.detector.empty() ? a.detector : (a.model == "adaboost" ? "fm-hog" : "fm-cra");
    std::string params = ConfigText(g);
    asr_trainset* ts = nullptr;
    Check(asr_trainset_new(&ts));
    Trainset set(ts);
    for (std::size_t i = 0; i < a.wavs.size(); ++i) {
      Clip clip = LoadClip(a.wavs[i], 0);
      Events truth = LoadEvents(a.truths[i]);
      const std::string id = "train:" + std::to_string(i);
      Check(asr_clip_set_channel_id(clip.get(), id.c_str()));
      Check(asr_events_set_channel(truth.get(), id.c_str()));
      if (detector == "pt") {
        asr_events* ev = nullptr;
        Check(asr_detect("pt", params.c_str(), nullptr, -std::numeric_limits<double>::infinity(),
                         clip.get(), &ev));
        Events dets(ev);
        Check(asr_trainset_add_detections(set.get(), dets.get(), truth.get(), a.overlap));
      } else if (detector == "fm-cra" || detector == "fm-hog") {
        std::string p = params.empty() ? "{}" : params;
        const auto open = p.find('{');
        if (open == std::string::npos) throw DomainError("detector parameters must be a JSON object");
        if (p.find("\"branch\"") == std::string::npos) {
          const auto close = p.find_first_not_of(" \t\r\n", open + 1);
          const bool empty = close != std::string::npos && p[close] == '}';
          p.insert(open + 1, "\"branch\": \"" + detector.substr(3) + "\"" + (empty ? "" : ","));
        }
        const unsigned long long seed = g.seed >= 0 ? static_cast<unsigned long long>(g.seed) + i : i + 1;
        Check(asr_trainset_harvest_fm(set.get(), p.c_str(), clip.get(), truth.get(), a.overlap,
                                      a.random_negatives, seed));
      } else {
        throw CLI::ValidationError("--detector", "unknown detector '" + detector + "'");
      }
    }
    Log(g, std::to_string(asr_trainset_positives(set.get())) + " positive / " +
               std::to_string(asr_trainset_negatives(set.get())) + " negative examples");
    if (!a.features_csv.empty()) {
      char* csv = nullptr;
      Check(asr_trainset_to_csv(set.get(), &csv));
      WriteFileAtomic(a.features_csv, Take(csv));
    }
    if (a.model == "mlp") {
      Check(asr_train_mlp(set.get(), hyper.c_str(), &out));
    } else {
      Check(asr_train_adaboost(set.get(), hyper.c_str(), &out));
    }
  }
  Model model(out);
  Check(asr_model_save(model.get(), g.out.c_str()));
  Log(g, std::string("saved ") + asr_model_kind(model.get()) + " model, features " +
             asr_model_fingerprint(model.get()));
}

// ---- fuse ----

struct FuseArgs {
  std::string dets;
  std::string model;
  double min_score = 3.0;
  bool jsonl = false;
};

void RunFuse(const Globals& g, const FuseArgs& a) {
  Events dets = LoadEvents(a.dets);
  Model model = LoadModel(a.model);
  asr_events* out = nullptr;
  Check(asr_fusion_filter(dets.get(), model.get(), a.min_score, &out));
  Events kept(out);
  WriteEvents(kept.get(), g.out, a.jsonl);
  Log(g, std::to_string(asr_events_count(kept.get())) + " of " +
             std::to_string(asr_events_count(dets.get())) + " events kept");
}

// ---- eval ----

struct EvalArgs {
  std::string dets;
  std::string truth;
  double min_overlap = 0.5;
  double hours = 0.0;
  long long negative_windows = 0;
  bool ignore_channel = false;
  double threshold = std::numeric_limits<double>::quiet_NaN();
};

double DefaultHours(const asr_events* a, const asr_events* b) {
  double end = 0.0;
  for (const asr_events* set : {a, b}) {
    for (std::size_t i = 0; i < asr_events_count(set); ++i) {
      asr_event_info info;
      Check(asr_events_get(set, i, &info));
      end = std::max(end, info.t1_s);
    }
  }
  return end > 0 ? end / 3600.0 : 1.0;
}

Events ThresholdEvents(const asr_events* events, double threshold) {
  asr_events* out = nullptr;
  Check(asr_events_new(&out));
  Events kept(out);
  std::string tsv;
  char* text = nullptr;
  Check(asr_events_to_tsv(events, &text));
  const std::string all = Take(text);
  std::istringstream in(all);
  std::string line;
  std::getline(in, line);
  tsv = line + "\n";
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    asr_event_info info;
    Check(asr_events_get(events, i++, &info));
    if (info.score >= threshold) tsv += line + "\n";
  }
  asr_events* parsed = nullptr;
  Check(asr_events_parse_tsv(tsv.c_str(), &parsed));
  return Events(parsed);
}

void RunEval(const Globals& g, const EvalArgs& a) {
  Events dets = LoadEvents(a.dets);
  Events truth = LoadEvents(a.truth);
  if (a.ignore_channel) {
    Check(asr_events_set_channel(dets.get(), "any"));
    Check(asr_events_set_channel(truth.get(), "any"));
  }
  if (!std::isnan(a.threshold)) dets = ThresholdEvents(dets.get(), a.threshold);
  const double hours = a.hours > 0 ? a.hours : DefaultHours(dets.get(), truth.get());
  char* json = nullptr;
  Check(asr_eval_metrics_json(dets.get(), truth.get(), a.min_overlap, hours, a.negative_windows,
                              &json));
  Emit(g.out, Take(json));
}

// ---- pr-curve ----

struct PrArgs {
  std::vector<std::string> dets;
  std::vector<std::string> names;
  std::string truth;
  std::string svg;
  double min_overlap = 0.5;
  bool ignore_channel = false;
  std::string title = "Precision-recall";
};

void RunPr(const Globals& g, const PrArgs& a) {
  Events truth = LoadEvents(a.truth);
  std::vector<Events> sets;
  for (const auto& d : a.dets) sets.push_back(LoadEvents(d));
  if (a.ignore_channel) {
    Check(asr_events_set_channel(truth.get(), "any"));
    for (auto& set : sets) Check(asr_events_set_channel(set.get(), "any"));
  }
  std::string csv;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    char* text = nullptr;
    double ap = 0.0;
    Check(asr_pr_curve_csv(sets[i].get(), truth.get(), a.min_overlap, &text, &ap));
    std::string body = Take(text);
    if (sets.size() > 1) {
      const std::string name = i < a.names.size() ? a.names[i] : a.dets[i];
      std::istringstream in(body);
      std::string line;
      std::string prefixed;
      bool header = true;
      while (std::getline(in, line)) {
        if (header) {
          if (i == 0) prefixed += "series," + line + "\n";
          header = false;
        } else {
          prefixed += name + "," + line + "\n";
        }
      }
      body = prefixed;
    }
    csv += body;
    Log(g, (i < a.names.size() ? a.names[i] : a.dets[i]) + ": average precision " + FormatNumber(ap));
  }
  Emit(g.out, csv);
  if (!a.svg.empty()) {
    std::vector<const asr_events*> ptrs;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      ptrs.push_back(sets[i].get());
      names.push_back(i < a.names.size() ? a.names[i] : std::filesystem::path(a.dets[i]).stem().string());
    }
    std::vector<const char*> cnames;
    for (const auto& n : names) cnames.push_back(n.c_str());
    char* svg = nullptr;
    Check(asr_pr_curve_svg(ptrs.data(), cnames.data(), ptrs.size(), truth.get(), a.min_overlap,
                           a.title.c_str(), &svg));
    WriteFileAtomic(a.svg, Take(svg));
  }
}

// ---- diel ----

struct DielArgs {
  std::string dets;
  std::string epoch;
  std::string manifest;
  std::string from;
  std::string to;
  int bin_minutes = 60;
  std::string svg;
};

std::pair<std::string, std::string> EventDays(const asr_events* events, const std::string& epoch) {
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < asr_events_count(events); ++i) {
    asr_event_info info;
    Check(asr_events_get(events, i, &info));
    if (i == 0 || info.t0_s < lo) lo = info.t0_s;
    if (i == 0 || info.t0_s > hi) hi = info.t0_s;
  }
  char* a = nullptr;
  char* b = nullptr;
  Check(asr_format_date(epoch.c_str(), lo, &a));
  std::string first = Take(a);
  Check(asr_format_date(epoch.c_str(), hi, &b));
  return {first, Take(b)};
}

void RunDiel(const Globals& g, const DielArgs& a) {
  Events dets = LoadEvents(a.dets);
  std::string epoch = a.epoch;
  if (epoch.empty()) {
    if (a.manifest.empty()) throw CLI::ValidationError("--epoch", "diel needs --epoch or --manifest");
    char* e = nullptr;
    Check(asr_manifest_epoch(a.manifest.c_str(), &e));
    epoch = Take(e);
  }
  auto [first, last] = EventDays(dets.get(), epoch);
  if (!a.from.empty()) first = a.from;
  if (!a.to.empty()) last = a.to;
  char* csv = nullptr;
  char* svg = nullptr;
  long long dropped = 0;
  Check(asr_diel(dets.get(), epoch.c_str(), first.c_str(), last.c_str(), a.bin_minutes, &csv,
                 a.svg.empty() ? nullptr : &svg, &dropped));
  const std::string csv_text = Take(csv);
  const std::string svg_text = Take(svg);
  Emit(g.out, csv_text);
  if (!a.svg.empty()) WriteFileAtomic(a.svg, svg_text);
  if (dropped > 0) std::cerr << "asr: " << dropped << " events outside the date range\n";
}

// ---- batch ----

struct BatchArgs {
  std::string manifest;
  std::string report;
  bool jsonl = false;
};

void RunBatch(const Globals& g, const BatchArgs& a) {
  const std::string cfg = ConfigText(g);
  const std::string dir =
      g.config.empty() ? std::string() : std::filesystem::path(g.config).parent_path().string();
  asr_events* ev = nullptr;
  char* report = nullptr;
  Check(asr_batch_run(a.manifest.c_str(), cfg.c_str(), dir.c_str(), g.workers, &ev, &report));
  Events events(ev);
  const std::string report_text = Take(report);
  WriteEvents(events.get(), g.out, a.jsonl);
  if (!a.report.empty()) WriteFileAtomic(a.report, report_text);
  Log(g, std::to_string(asr_events_count(events.get())) + " merged events");
}

// ---- report ----

struct ReportArgs {
  std::string dets;
  std::string truth;
  std::string manifest;
  double min_overlap = 0.5;
  int bin_minutes = 60;
};

std::string JsonString(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out + "\"";
}

void RunReport(const Globals& g, const ReportArgs& a) {
  if (g.out.empty()) throw CLI::ValidationError("--out", "report needs --out <directory>");
  std::filesystem::create_directories(g.out);
  const std::filesystem::path dir(g.out);
  Events dets = LoadEvents(a.dets);
  std::map<std::string, std::size_t> by_kind, by_channel;
  for (std::size_t i = 0; i < asr_events_count(dets.get()); ++i) {
    asr_event_info info;
    Check(asr_events_get(dets.get(), i, &info));
    ++by_kind[info.kind];
    ++by_channel[info.channel_id];
  }
  std::string json = "{\n  \"events\": " + std::to_string(asr_events_count(dets.get())) + ",\n";
  auto counts = [&](const char* key, const std::map<std::string, std::size_t>& m) {
    json += std::string("  \"") + key + "\": {";
    bool first = true;
    for (const auto& [k, v] : m) {
      json += (first ? "" : ", ") + JsonString(k) + ": " + std::to_string(v);
      first = false;
    }
    json += "},\n";
  };
  counts("by_kind", by_kind);
  counts("by_channel", by_channel);
  double hours = 0.0;
  if (!a.manifest.empty()) {
    Check(asr_manifest_channel_hours(a.manifest.c_str(), &hours));
    json += "  \"channel_hours\": " + FormatNumber(hours) + ",\n";
  }
  if (!a.truth.empty()) {
    Events truth = LoadEvents(a.truth);
    if (hours <= 0) hours = DefaultHours(dets.get(), truth.get());
    char* metrics = nullptr;
    Check(asr_eval_metrics_json(dets.get(), truth.get(), a.min_overlap, hours, 0, &metrics));
    std::string m = Take(metrics);
    while (!m.empty() && (m.back() == '\n' || m.back() == ' ')) m.pop_back();
    std::string indented;
    for (char c : m) {
      indented += c;
      if (c == '\n') indented += "  ";
    }
    json += "  \"metrics\": " + indented + ",\n";
    if (asr_events_count(truth.get()) > 0) {
      char* csv = nullptr;
      double ap = 0.0;
      Check(asr_pr_curve_csv(dets.get(), truth.get(), a.min_overlap, &csv, &ap));
      WriteFileAtomic((dir / "pr_curve.csv").string(), Take(csv));
      const asr_events* sets[] = {dets.get()};
      const char* names[] = {"detections"};
      char* svg = nullptr;
      Check(asr_pr_curve_svg(sets, names, 1, truth.get(), a.min_overlap, "Precision-recall", &svg));
      WriteFileAtomic((dir / "pr_curve.svg").string(), Take(svg));
      json += "  \"average_precision\": " + FormatNumber(ap) + ",\n";
    }
  }
  if (!a.manifest.empty() && asr_events_count(dets.get()) > 0) {
    char* e = nullptr;
    Check(asr_manifest_epoch(a.manifest.c_str(), &e));
    const std::string epoch = Take(e);
    const auto [first, last] = EventDays(dets.get(), epoch);
    char* csv = nullptr;
    char* svg = nullptr;
    long long dropped = 0;
    Check(asr_diel(dets.get(), epoch.c_str(), first.c_str(), last.c_str(), a.bin_minutes, &csv,
                   &svg, &dropped));
    WriteFileAtomic((dir / "diel.csv").string(), Take(csv));
    WriteFileAtomic((dir / "diel.svg").string(), Take(svg));
  }
  json += "  \"version\": " + JsonString(asr_version()) + "\n}\n";
  WriteFileAtomic((dir / "summary.json").string(), json);
  Log(g, "report written to " + g.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic segmentation recognition for marine mammal sounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice (overrides files)");
  app.add_option("--config", g.config, "JSON parameters for the subcommand");
  app.add_option("--out", g.out, "Output path ('-' or absent: standard output)");
  app.add_option("--workers", g.workers, "Worker threads for batch runs")->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", g.verbose, "Progress messages on standard error");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Render a synthetic scene to WAV plus truth table");
  s->add_option("--scene", synth.scene, "Scene description (JSON)")->required()->check(CLI::ExistingFile);
  s->add_option("--truth", synth.truth, "Truth selection table to write");
  s->add_flag("--float32", synth.float32, "Write 32-bit float samples");

  DetectArgs fm;
  auto* dfm = app.add_subcommand("detect-fm", "Detect FM calls (up-calls)");
  dfm->add_option("input", fm.input, "Input WAV")->required()->check(CLI::ExistingFile);
  dfm->add_option("--branch", fm.branch, "cra or hog")->check(CLI::IsMember({"cra", "hog"}));
  dfm->add_option("--model", fm.model, "Classifier model (JSON)");
  dfm->add_option("--threshold", fm.threshold, "Minimum score (default: the model's)");
  dfm->add_flag("--all", fm.all, "Report every candidate with its score");
  dfm->add_option("--channel", fm.channel, "Channel index")->check(CLI::NonNegativeNumber);
  dfm->add_option("--channel-id", fm.channel_id, "Channel id written on each event");
  dfm->add_flag("--jsonl", fm.jsonl, "Write JSON lines instead of TSV");

  DetectArgs pt;
  auto* dpt = app.add_subcommand("detect-pt", "Detect periodic pulse trains");
  dpt->add_option("input", pt.input, "Input WAV")->required()->check(CLI::ExistingFile);
  dpt->add_option("--model", pt.model, "Classifier model (JSON)");
  dpt->add_option("--threshold", pt.threshold, "Minimum score (default: the model's)");
  dpt->add_flag("--all", pt.all, "Report every train with its score");
  dpt->add_option("--channel", pt.channel, "Channel index")->check(CLI::NonNegativeNumber);
  dpt->add_option("--channel-id", pt.channel_id, "Channel id written on each event");
  dpt->add_flag("--jsonl", pt.jsonl, "Write JSON lines instead of TSV");

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a classifier");
  t->add_option("--model", tr.model, "mlp, adaboost or fusion")
      ->check(CLI::IsMember({"mlp", "adaboost", "fusion"}));
  t->add_option("--detector", tr.detector, "fm-cra, fm-hog or pt (candidate source)");
  t->add_option("--wav", tr.wavs, "Training recording (repeatable)");
  t->add_option("--truth", tr.truths, "Truth table for the matching --wav (repeatable)");
  t->add_option("--train-config", tr.train_config, "Hyper-parameters (JSON)");
  t->add_option("--random-negatives", tr.random_negatives, "Extra noise boxes per recording");
  t->add_option("--overlap", tr.overlap, "Overlap fraction that makes a positive");
  t->add_option("--features-csv", tr.features_csv, "Also write the feature matrix");
  t->add_option("--dets", tr.dets, "Featured detections (fusion)");
  t->add_option("--scores", tr.scores, "Analyst scores TSV (fusion)");

  FuseArgs fu;
  auto* f = app.add_subcommand("fuse", "Re-score events with a fusion model and filter");
  f->add_option("--dets", fu.dets, "Featured detections")->required();
  f->add_option("--model", fu.model, "Fusion model")->required();
  f->add_option("--min-score", fu.min_score, "Keep events predicted above this score");
  f->add_flag("--jsonl", fu.jsonl, "Write JSON lines instead of TSV");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Match detections against truth and report metrics");
  e->add_option("--dets", ev.dets, "Detections")->required();
  e->add_option("--truth", ev.truth, "Truth")->required();
  e->add_option("--min-overlap", ev.min_overlap, "Minimum overlap fraction of the truth");
  e->add_option("--hours", ev.hours, "Recording hours (default: last event end)");
  e->add_option("--negative-windows", ev.negative_windows, "Denominator for the FP rate");
  e->add_flag("--ignore-channel", ev.ignore_channel, "Match regardless of channel id");
  e->add_option("--threshold", ev.threshold, "Ignore detections scoring below this");

  PrArgs pr;
  auto* p = app.add_subcommand("pr-curve", "Precision-recall curve over detection scores");
  p->add_option("--dets", pr.dets, "Detections (repeatable for comparison)")->required();
  p->add_option("--name", pr.names, "Legend name per --dets");
  p->add_option("--truth", pr.truth, "Truth")->required();
  p->add_option("--svg", pr.svg, "Also render an SVG plot");
  p->add_option("--min-overlap", pr.min_overlap, "Minimum overlap fraction of the truth");
  p->add_flag("--ignore-channel", pr.ignore_channel, "Match regardless of channel id");
  p->add_option("--title", pr.title, "Plot title");

  DielArgs di;
  auto* d = app.add_subcommand("diel", "Day by time-of-day detection counts");
  d->add_option("--dets", di.dets, "Detections")->required();
  d->add_option("--epoch", di.epoch, "Deployment epoch (ISO-8601)");
  d->add_option("--manifest", di.manifest, "Take the epoch from this manifest");
  d->add_option("--from", di.from, "First day YYYY-MM-DD (default: first event)");
  d->add_option("--to", di.to, "Last day YYYY-MM-DD (default: last event)");
  d->add_option("--bin-minutes", di.bin_minutes, "Time-of-day bin width");
  d->add_option("--svg", di.svg, "Also render an SVG raster");

  BatchArgs ba;
  auto* b = app.add_subcommand("batch", "Run a pipeline over an archive manifest");
  b->add_option("--manifest", ba.manifest, "Archive manifest (JSON)")->required();
  b->add_option("--report", ba.report, "Run report (JSON) to write");
  b->add_flag("--jsonl", ba.jsonl, "Write JSON lines instead of TSV");

  ReportArgs re;
  auto* r = app.add_subcommand("report", "Summary, PR curve and diel plots for a detection set");
  r->add_option("--dets", re.dets, "Detections")->required();
  r->add_option("--truth", re.truth, "Truth (enables metrics and PR curve)");
  r->add_option("--manifest", re.manifest, "Manifest (enables diel plots and hours)");
  r->add_option("--min-overlap", re.min_overlap, "Minimum overlap fraction of the truth");
  r->add_option("--bin-minutes", re.bin_minutes, "Diel bin width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForAllHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::CallForVersion& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  }

  try {
    if (s->parsed()) RunSynth(g, synth);
    if (dfm->parsed()) RunDetect(g, fm, "fm-" + fm.branch);
    if (dpt->parsed()) RunDetect(g, pt, "pt");
    if (t->parsed()) RunTrain(g, tr);
    if (f->parsed()) RunFuse(g, fu);
    if (e->parsed()) RunEval(g, ev);
    if (p->parsed()) RunPr(g, pr);
    if (d->parsed()) RunDiel(g, di);
    if (b->parsed()) RunBatch(g, ba);
    if (r->parsed()) RunReport(g, re);
  } catch (const CLI::ValidationError& ex) {
    std::cerr << "asr: usage error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "asr: error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
