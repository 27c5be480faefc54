/* C interface to the xdt toolchain: parse/check programs, query kinds and
 * normal forms, evaluate, and cross-check against the definitional
 * interpreter. Handles are opaque; strings returned as char* are owned by
 * the caller and released with xdt_string_free. On failure, functions
 * return NULL (or a status) and the thread-local last-error slots hold the
 * diagnostic. */
#ifndef XDT_H
#define XDT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  XDT_OK = 0,
  XDT_ERR_PARSE = 1,
  XDT_ERR_CHECK = 2,
  XDT_ERR_FUEL = 3,
  XDT_ERR_STUCK = 4,
  XDT_ERR_USAGE = 5,
  XDT_ERR_INTERNAL = 6,
} xdt_status;

typedef struct xdt_program xdt_program;

/* Parses and fully checks a program. NULL on failure. */
xdt_program* xdt_program_load(const char* source_text);
void xdt_program_free(xdt_program* p);

/* Last-error info for the calling thread. The strings stay valid until the
 * next failing call. */
xdt_status xdt_last_status(void);
const char* xdt_last_error_code(void);
const char* xdt_last_error_message(void);
int xdt_last_error_line(void); /* 1-based; 0 when unknown */
int xdt_last_error_col(void);

/* Checked let declarations, in order. */
int xdt_decl_count(const xdt_program* p);
const char* xdt_decl_name(const xdt_program* p, int i);
char* xdt_decl_scheme(const xdt_program* p, int i);

/* Kind / normal form of a declared type, in surface syntax. */
char* xdt_kind_of(const xdt_program* p, const char* type_name);
char* xdt_norm_of(const xdt_program* p, const char* type_name);

typedef void (*xdt_trace_fn)(const char* rule, const char* term, void* user);

typedef struct {
  xdt_status status;
  long steps;
  char* value;       /* printed result (or last term on fuel/stuck) */
  char* observation; /* observation tree when main's type is observable */
} xdt_eval_result;

/* Evaluates main under the small-step semantics. */
xdt_eval_result* xdt_eval(const xdt_program* p, long fuel, xdt_trace_fn trace, void* user);
void xdt_eval_result_free(xdt_eval_result* r);

typedef struct {
  int agree;
  char* machine_observation;
  char* oracle_observation;
} xdt_oracle_result;

/* Runs main on both semantics and compares observation trees. */
xdt_oracle_result* xdt_oracle(const xdt_program* p, long fuel);
void xdt_oracle_result_free(xdt_oracle_result* r);

void xdt_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* XDT_H */
