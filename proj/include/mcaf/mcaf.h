/* Copyright (C) 2026 The mcaf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the mcaf vulnerability-detection library.
 *
 * Conventions:
 *   - Every function returns an mcaf_status; MCAF_OK (0) means success.
 *   - On failure, mcaf_last_error() returns a thread-local message that
 *     stays valid until the next mcaf_* call on the same thread.
 *   - Output strings (char**) are heap-allocated, NUL-terminated, and owned
 *     by the caller; release them with mcaf_free(). On failure, outputs are
 *     left untouched.
 *   - Optional string parameters accept NULL (documented per function).
 *   - `overrides` parameters take newline-separated `key = value` lines in
 *     the same grammar as the config file, applied after it.
 */

#ifndef MCAF_MCAF_H_
#define MCAF_MCAF_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcaf_status {
  MCAF_OK = 0,
  MCAF_ERR_SYNTAX,
  MCAF_ERR_UNSUPPORTED_CONSTRUCT,
  MCAF_ERR_EMPTY_INPUT,
  MCAF_ERR_SCHEMA,
  MCAF_ERR_CYCLE,
  MCAF_ERR_DEGENERATE_AST,
  MCAF_ERR_EMPTY_CORPUS,
  MCAF_ERR_INDEX_OUT_OF_VOCAB,
  MCAF_ERR_ALL_MASKED,
  MCAF_ERR_ALIGNMENT,
  MCAF_ERR_SINGLE_CLASS_DATASET,
  MCAF_ERR_NO_POSITIVE_LABELS,
  MCAF_ERR_VOCAB_MISMATCH,
  MCAF_ERR_CONFIG,
  MCAF_ERR_IO,
  MCAF_ERR_INVALID_ARGUMENT,
  MCAF_ERR_INTERNAL
} mcaf_status;

/* Short stable name for a status value, e.g. "SchemaError". */
const char* mcaf_status_name(mcaf_status status);

/* Message for the most recent failure on this thread ("" if none). */
const char* mcaf_last_error(void);

/* Releases any buffer returned through a char** out-parameter. */
void mcaf_free(void* ptr);

/* ---- Pipeline commands (one per CLI subcommand) ----------------------- */

/* Mines labeled path contexts from .c / .json inputs into a JSONL corpus.
 * config_path may be NULL; overrides may be NULL. summary_out (optional,
 * may be NULL) receives a one-line human summary. */
mcaf_status mcaf_cmd_extract(const char* const* inputs, size_t n_inputs,
                             const char* config_path, const char* overrides,
                             char** summary_out);

/* Writes n generated functions under the configured output directory
 * (override key `out`), split into good/ and bad/, plus planted.json.
 * The generation seed is the config `seed` (override line "seed = N"). */
mcaf_status mcaf_cmd_gen_synthetic(size_t n, const char* config_path,
                                   const char* overrides, char** summary_out);

/* Trains on a labeled JSONL corpus; writes checkpoint.mcaf, vocab.json,
 * history.csv, and report.json under the configured output directory. */
mcaf_status mcaf_cmd_train(const char* corpus_path, const char* config_path,
                           const char* overrides, char** summary_out);

/* Scores a labeled corpus under a checkpoint. vocab_path is the vocab.json
 * written by training. report_json_out (optional) receives the metrics
 * report JSON. */
mcaf_status mcaf_cmd_eval(const char* checkpoint_path, const char* vocab_path,
                          const char* corpus_path, const char* config_path,
                          const char* overrides, char** report_json_out);

/* Renders line-level attribution for one function (.c or .json input).
 * output_out receives the prediction banner plus the rendering;
 * sidecar_json_out (optional) receives the per-line JSON attribution. */
mcaf_status mcaf_cmd_explain(const char* checkpoint_path,
                             const char* vocab_path, const char* input_path,
                             const char* config_path, const char* overrides,
                             char** output_out, char** sidecar_json_out);

/* ---- Fine-grained access ---------------------------------------------- */

/* Parses the first C function in `source` to the AST interchange JSON. */
mcaf_status mcaf_parse_source(const char* source, char** ast_json_out);

/* A loaded model handle: checkpoint plus vocabulary. */
typedef struct mcaf_model mcaf_model;

mcaf_status mcaf_model_load(const char* checkpoint_path,
                            const char* vocab_path, mcaf_model** model_out);
void mcaf_model_free(mcaf_model* model);

/* Probability that the first function in `source` is vulnerable. */
mcaf_status mcaf_model_predict(const mcaf_model* model, const char* source,
                               double* p_vulnerable_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MCAF_MCAF_H_ */
