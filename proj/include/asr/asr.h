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

/* C interface to the acoustic segmentation recognition library.
 *
 * Every function returns an asr_status. On failure the thread's last error
 * message describes the problem (asr_last_error). Objects are opaque handles
 * released with the matching *_free function. Strings returned through
 * char** are heap allocated and released with asr_string_free.
 */
#ifndef ASR_ASR_H_
#define ASR_ASR_H_

#include <stddef.h>

#if defined(ASR_BUILDING_LIBRARY)
#define ASR_API __attribute__((visibility("default")))
#else
#define ASR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asr_status {
  ASR_OK = 0,
  ASR_E_INVALID_ARGUMENT = 1,
  ASR_E_NOT_FOUND = 2,
  ASR_E_IO = 3,
  ASR_E_PARSE = 4,
  ASR_E_UNSUPPORTED = 5,
  ASR_E_TRUNCATED = 6,
  ASR_E_VALIDATION = 7,
  ASR_E_MISMATCH = 8,
  ASR_E_DEGENERATE = 9,
  ASR_E_INTERNAL = 100
} asr_status;

typedef struct asr_clip asr_clip;
typedef struct asr_events asr_events;
typedef struct asr_model asr_model;
typedef struct asr_trainset asr_trainset;

ASR_API const char* asr_version(void);
ASR_API const char* asr_status_name(asr_status status);
/* Message for the most recent failure on the calling thread ("" if none). */
ASR_API const char* asr_last_error(void);
ASR_API void asr_string_free(char* s);

/* ---- audio ---- */

ASR_API asr_status asr_clip_read_wav(const char* path, int channel,
                                     asr_clip** out);
ASR_API asr_status asr_clip_from_samples(const double* samples, size_t n,
                                         double sample_rate_hz,
                                         const char* channel_id,
                                         double start_time_s, asr_clip** out);
ASR_API size_t asr_clip_length(const asr_clip* clip);
ASR_API double asr_clip_sample_rate(const asr_clip* clip);
ASR_API const double* asr_clip_samples(const asr_clip* clip);
/* float32 != 0 writes IEEE float samples, otherwise 16-bit PCM. */
ASR_API asr_status asr_clip_write_wav(const asr_clip* clip, const char* path,
                                      int float32);
ASR_API asr_status asr_clip_set_channel_id(asr_clip* clip, const char* channel_id);
ASR_API void asr_clip_free(asr_clip* clip);

/* Renders a synthetic scene description (JSON). seed >= 0 overrides the
 * scene's rng_seed. */
ASR_API asr_status asr_synth_render(const char* scene_json, long long seed,
                                    asr_clip** clip_out,
                                    asr_events** truth_out);

/* ---- events ---- */

typedef struct asr_event_info {
  const char* id;
  const char* channel_id;
  const char* kind;
  const char* source;
  double t0_s;
  double t1_s;
  double f_lo_hz;
  double f_hi_hz;
  double score;
  int has_features;
  int has_predicted_score;
  double predicted_score;
} asr_event_info;

ASR_API asr_status asr_events_new(asr_events** out);
ASR_API asr_status asr_events_read_tsv(const char* path, asr_events** out);
ASR_API asr_status asr_events_parse_tsv(const char* text, asr_events** out);
ASR_API asr_status asr_events_write_tsv(const asr_events* events,
                                        const char* path);
ASR_API asr_status asr_events_to_tsv(const asr_events* events, char** out);
ASR_API asr_status asr_events_to_jsonl(const asr_events* events, char** out);
ASR_API size_t asr_events_count(const asr_events* events);
/* Pointers in info stay valid until the handle is modified or freed. */
ASR_API asr_status asr_events_get(const asr_events* events, size_t index,
                                  asr_event_info* info);
/* Appends copies of src's events to dst. */
ASR_API asr_status asr_events_append(asr_events* dst, const asr_events* src);
/* Sorts canonically and renumbers ids 1..n. */
ASR_API asr_status asr_events_canonicalize(asr_events* events);
/* Assigns channel_id to every event. */
ASR_API asr_status asr_events_set_channel(asr_events* events, const char* channel_id);
ASR_API void asr_events_free(asr_events* events);

/* ---- detection ---- */

/* pipeline: "fm-cra", "fm-hog" or "pt"; params_json may be NULL or "".
 * model may be NULL. Events below threshold are dropped. */
ASR_API asr_status asr_detect(const char* pipeline, const char* params_json,
                              const asr_model* model, double threshold,
                              const asr_clip* clip, asr_events** out);

/* ---- models ---- */

ASR_API asr_status asr_model_load(const char* path, asr_model** out);
ASR_API asr_status asr_model_save(const asr_model* model, const char* path);
ASR_API asr_status asr_model_to_json(const asr_model* model, char** out);
/* "mlp", "adaboost" or "fusion". */
ASR_API const char* asr_model_kind(const asr_model* model);
ASR_API const char* asr_model_fingerprint(const asr_model* model);
ASR_API double asr_model_threshold(const asr_model* model);
ASR_API void asr_model_free(asr_model* model);

/* ---- training ---- */

ASR_API asr_status asr_trainset_new(asr_trainset** out);
/* Harvests labelled FM candidates from a clip. fm_params_json selects the
 * branch and the feature scheme. */
ASR_API asr_status asr_trainset_harvest_fm(asr_trainset* set,
                                           const char* fm_params_json,
                                           const asr_clip* clip,
                                           const asr_events* truth,
                                           double positive_overlap,
                                           int random_negatives,
                                           unsigned long long seed);
/* Labels featured detections by matching them against truth (positive when
 * matched). */
ASR_API asr_status asr_trainset_add_detections(asr_trainset* set,
                                               const asr_events* detections,
                                               const asr_events* truth,
                                               double min_overlap);
ASR_API size_t asr_trainset_positives(const asr_trainset* set);
ASR_API size_t asr_trainset_negatives(const asr_trainset* set);
/* Feature matrix CSV; the first line records the feature fingerprint. */
ASR_API asr_status asr_trainset_to_csv(const asr_trainset* set, char** out);
/* config_json keys: hidden, lr, epochs, l2, seed, balance_classes. */
ASR_API asr_status asr_train_mlp(const asr_trainset* set,
                                 const char* config_json, asr_model** out);
/* config_json keys: rounds, balance_classes. */
ASR_API asr_status asr_train_adaboost(const asr_trainset* set,
                                      const char* config_json,
                                      asr_model** out);
ASR_API void asr_trainset_free(asr_trainset* set);

/* ---- fusion ---- */

/* scores_tsv: "event_id analyst_id score" table. Events need features. */
ASR_API asr_status asr_fusion_train(const asr_events* events,
                                    const char* scores_tsv,
                                    const char* config_json, asr_model** out);
/* Keeps events predicted strictly above min_score. */
ASR_API asr_status asr_fusion_filter(const asr_events* events,
                                     const asr_model* model, double min_score,
                                     asr_events** out);

/* ---- evaluation ---- */

typedef struct asr_match_counts {
  size_t tp;
  size_t fp;
  size_t fn;
} asr_match_counts;

ASR_API asr_status asr_eval_match(const asr_events* dets,
                                  const asr_events* truth, double min_overlap,
                                  int require_freq_overlap,
                                  asr_match_counts* out);
/* negative_windows <= 0 omits the false-positive rate. */
ASR_API asr_status asr_eval_metrics_json(const asr_events* dets,
                                         const asr_events* truth,
                                         double min_overlap, double hours,
                                         long long negative_windows,
                                         char** out);
ASR_API asr_status asr_pr_curve_csv(const asr_events* dets,
                                    const asr_events* truth,
                                    double min_overlap, char** csv,
                                    double* average_precision);
/* One curve per detection set. */
ASR_API asr_status asr_pr_curve_svg(const asr_events* const* dets,
                                    const char* const* names, size_t n,
                                    const asr_events* truth,
                                    double min_overlap, const char* title,
                                    char** svg);
ASR_API asr_status asr_percent_difference(long long a, long long b,
                                          double* out);
/* csv and svg may be NULL when not wanted. */
ASR_API asr_status asr_diel(const asr_events* events, const char* epoch,
                            const char* first_day, const char* last_day,
                            int bin_minutes, char** csv, char** svg,
                            long long* dropped);

/* Calendar date (YYYY-MM-DD, UTC) of epoch + offset_s. */
ASR_API asr_status asr_format_date(const char* epoch, double offset_s,
                                   char** out);

/* ---- archives ---- */

ASR_API asr_status asr_manifest_epoch(const char* manifest_path, char** out);
ASR_API asr_status asr_manifest_channel_hours(const char* manifest_path,
                                              double* out);
/* run_config_json: pipeline, params, model, threshold, unit_duration_s,
 * overlap_s, workers. A relative model path is resolved against
 * config_dir (may be NULL). workers > 0 overrides the configured count. */
ASR_API asr_status asr_batch_run(const char* manifest_path,
                                 const char* run_config_json,
                                 const char* config_dir, int workers,
                                 asr_events** events, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* ASR_ASR_H_ */
