/**
 * Copyright 2026, The diffscope Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */


/* C interface to the diffscope library. All strings are UTF-8. Strings
 * returned through `char **` are owned by the caller and released with
 * ds_string_free. Functions returning ds_status record a message that
 * ds_last_error returns until the next failing call on the same thread. */

#ifndef DIFFSCOPE_H
#define DIFFSCOPE_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  if defined(DIFFSCOPE_BUILDING_LIBRARY)
#    define DS_API __declspec(dllexport)
#  else
#    define DS_API __declspec(dllimport)
#  endif
#else
#  define DS_API __attribute__((visibility("default")))
#endif

typedef struct ds_model ds_model;

typedef enum ds_status {
  DS_OK = 0,
  DS_ERR_INVALID_ARGUMENT = 1,
  DS_ERR_OUT_OF_DOMAIN = 2,
  DS_ERR_SINGULAR_POINT = 3,
  DS_ERR_NON_POSITIVE_DIFFUSION = 4,
  DS_ERR_INTEGRATION_FAILURE = 5,
  DS_ERR_NON_FINITE_EVALUATION = 6,
  DS_ERR_MAX_SUBDIVISIONS = 7,
  DS_ERR_DEGENERATE_TRUNCATION = 8,
  DS_ERR_SCHEMA = 9,
  DS_ERR_EXPRESSION_PARSE = 10,
  DS_ERR_VALIDATION = 11,
  DS_ERR_UNKNOWN_MODEL = 12,
  DS_ERR_OVERFLOW_GUARD = 13,
  DS_ERR_NULL_ARGUMENT = 14,
  DS_ERR_INTERNAL = 15
} ds_status;

typedef enum ds_format { DS_FORMAT_JSON = 0, DS_FORMAT_TEXT = 1 } ds_format;

DS_API const char *ds_version(void);
DS_API const char *ds_status_name(ds_status status);

/* Message of the last failure on this thread, "" if none. */
DS_API const char *ds_last_error(void);
/* JSON array of {pointer, code, message[, position]} for the last failure. */
DS_API const char *ds_last_error_details(void);

DS_API void ds_string_free(char *s);

/* Parses and validates a model document. */
DS_API ds_status ds_model_from_json(const char *json, ds_model **out);
/* `name` or `name(k=v, ...)` from the built-in catalog. */
DS_API ds_status ds_model_from_catalog(const char *name, ds_model **out);
DS_API void ds_model_free(ds_model *model);

/* The document the model was built from. */
DS_API ds_status ds_model_document(const ds_model *model, char **json_out);

DS_API ds_status ds_catalog_document(const char *name, char **json_out);
DS_API ds_status ds_catalog_list(ds_format format, char **out);

/* Schema and semantic check. Problems in the document are reported in the
 * output with *valid = 0; the return value is DS_OK unless the call itself
 * fails. */
DS_API ds_status ds_validate_json(const char *json, ds_format format, char **out, int *valid);

/* `horizon` is "finite", "infinite", "both" or NULL for the document's
 * choice. *all_conclusive is 1 when every requested verdict is conclusive. */
DS_API ds_status ds_classify(const ds_model *model, const char *horizon, ds_format format,
                             char **out, int *all_conclusive);

/* `options_json` may be NULL or an object with any of: mode ("smd", "exit",
 * "paths", "gap"), T, n_paths, seed, h, interval [lo, hi], spacing ("auto",
 * "uniform_scale", "equal_time"), exponential_holding. */
DS_API ds_status ds_simulate(const ds_model *model, const char *options_json, ds_format format,
                             char **out);

#ifdef __cplusplus
}
#endif

#endif /* DIFFSCOPE_H */
