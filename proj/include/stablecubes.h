#ifndef STABLECUBES_H
#define STABLECUBES_H

/* C interface to the stable cubulation pipeline. All functions return a
 * status code; results come back as heap-allocated JSON strings that must be
 * released with scube_string_free. Handles are opaque and must be released
 * with scube_instance_free. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SCUBE_OK 0            /* success, all checks passed */
#define SCUBE_CHECK_FAILED 1  /* ran to completion, some check failed */
#define SCUBE_USAGE 2         /* bad arguments / unreadable input */
#define SCUBE_ERROR 3         /* a declared spec error was raised */

typedef struct scube_instance scube_instance;

int scube_abi_version(void);

/* Message of the last SCUBE_ERROR/SCUBE_USAGE on this thread, or "". */
const char* scube_last_error(void);

/* Seeded synthetic HHS instance. */
int scube_instance_generate(uint64_t seed, scube_instance** out);

/* Parse an instance from its JSON document. */
int scube_instance_from_json(const char* text, scube_instance** out);

/* Serialize; *out_json is owned by the caller. */
int scube_instance_to_json(const scube_instance* in, char** out_json);

/* Axiom validation; returns SCUBE_OK / SCUBE_CHECK_FAILED and the report. */
int scube_instance_validate(const scube_instance* in, char** out_report);

/* Full fellow-traveling run with the seeded unit perturbation. */
int scube_instance_bicomb(const scube_instance* in, uint64_t seed,
                          char** out_report);

/* CLI dispatcher: argv-style subcommand, JSON report out. Returns the exit
 * code (0 pass, 1 check failure, 2 usage). */
int scube_run_command(int argc, const char* const* argv, char** out_json);

void scube_instance_free(scube_instance* in);
void scube_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STABLECUBES_H */
