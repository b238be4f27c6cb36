#ifndef PFGR_PFGR_H
#define PFGR_PFGR_H

/* C interface to the pfgr core. Every object is an opaque handle owned by the
 * caller and released with its destroy function. Strings returned through
 * out-parameters are heap copies freed with pfgr_free_string. On a non-OK
 * status, pfgr_last_error() describes the failure (thread-local). */

#include <stdint.h>

#if defined(PFGR_BUILDING)
#define PFGR_API __attribute__((visibility("default")))
#else
#define PFGR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pfgr_status {
  PFGR_OK = 0,
  PFGR_ERR_INVALID_ARGUMENT = 1, /* null handle or out-parameter */
  PFGR_ERR_CONFIG = 2,           /* bad value, unknown key, malformed JSON */
  PFGR_ERR_COMPUTATION = 3,      /* e.g. no admissible model within the attempt budget */
  PFGR_ERR_NOT_FOUND = 4,
  PFGR_ERR_INTERNAL = 5
} pfgr_status;

typedef struct pfgr_config pfgr_config;
typedef struct pfgr_report pfgr_report;
typedef struct pfgr_model pfgr_model;

PFGR_API const char* pfgr_version(void);
PFGR_API const char* pfgr_last_error(void);
PFGR_API void pfgr_free_string(char* s);

PFGR_API pfgr_status pfgr_config_create(pfgr_config** out);
PFGR_API void pfgr_config_destroy(pfgr_config* c);
/* Keys: field, q, seed, d, dp_cutoff, dx_cutoff, trunc, samples, census_q,
 * suite, l_bound, m_bound, rank_points, critical_positives,
 * critical_near_misses, critical_random, en_cutoff, model. */
PFGR_API pfgr_status pfgr_config_set(pfgr_config* c, const char* key, const char* value);
PFGR_API pfgr_status pfgr_config_load_json(pfgr_config* c, const char* json_text);
PFGR_API pfgr_status pfgr_config_validate(const pfgr_config* c);
PFGR_API pfgr_status pfgr_config_json(const pfgr_config* c, char** out);

/* A report is produced even when checks fail; PFGR_OK means the suites ran. */
PFGR_API pfgr_status pfgr_run(const pfgr_config* c, pfgr_report** out);
PFGR_API int pfgr_report_passed(const pfgr_report* r);
PFGR_API pfgr_status pfgr_report_json(const pfgr_report* r, int include_timings, char** out);
PFGR_API pfgr_status pfgr_report_text(const pfgr_report* r, int include_timings, char** out);
PFGR_API void pfgr_report_destroy(pfgr_report* r);

PFGR_API pfgr_status pfgr_model_generate(const pfgr_config* c, pfgr_model** out);
PFGR_API pfgr_status pfgr_model_from_json(const char* json_text, pfgr_model** out);
PFGR_API pfgr_status pfgr_model_json(const pfgr_model* m, char** out);
/* Rank census of the model over F_q as CSV. */
PFGR_API pfgr_status pfgr_model_census_csv(const pfgr_model* m, uint32_t q, char** out);
PFGR_API void pfgr_model_destroy(pfgr_model* m);

#ifdef __cplusplus
}
#endif

#endif
