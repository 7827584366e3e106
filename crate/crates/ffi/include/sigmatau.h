#ifndef SIGMATAU_H
#define SIGMATAU_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdint.h>

// Result of every call.
typedef enum StStatus {
  ST_STATUS_OK = 0,
  // A required pointer argument was null.
  ST_STATUS_NULL_ARGUMENT = 1,
  // Malformed polynomial, circuit or number text.
  ST_STATUS_PARSE = 2,
  ST_STATUS_INVALID_ARGUMENT = 3,
  ST_STATUS_DEGREE_CAP = 4,
  ST_STATUS_ZERO_POLYNOMIAL = 5,
  // An internal certificate failed; always a bug.
  ST_STATUS_INTERNAL = 6,
  // A Rust panic was caught at the boundary.
  ST_STATUS_PANIC = 7,
} StStatus;

// Additive-complexity circuit.
typedef struct StCircuit StCircuit;

// Polynomial with rational coefficients.
typedef struct StPoly StPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next failing call on the same thread; do not free.
const char *st_last_error(void);

// Library version, static storage.
const char *st_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void st_string_free(char *s);

// Parses a polynomial such as `"x^2 - 6*x + 8"`.
//
// # Safety
// `src` must be a nul-terminated string; `out_poly` a valid pointer.
enum StStatus st_poly_parse(const char *src, uint64_t degree_cap, struct StPoly **out_poly);

// # Safety
// `p` must come from this library and not have been freed; null is ignored.
void st_poly_free(struct StPoly *p);

// Canonical text form.
//
// # Safety
// Pointers must be valid.
enum StStatus st_poly_to_string(const struct StPoly *p, char **out_str);

// Degree; fails with `ZeroPolynomial` for 0.
//
// # Safety
// Pointers must be valid.
enum StStatus st_poly_degree(const struct StPoly *p, uint64_t *out_degree);

// Newton polygon as JSON `[[a,"v"],...]`.
//
// # Safety
// Pointers must be valid.
enum StStatus st_newton_polygon_json(const struct StPoly *p, uint64_t prime_p, char **out_json);

// Number of distinct valuations of nonzero roots over ℂ_p.
//
// # Safety
// Pointers must be valid.
enum StStatus st_distinct_valuations(const struct StPoly *p, uint64_t prime_p, uint64_t *out_count);

// Distinct roots in ℤ_p.
//
// # Safety
// Pointers must be valid.
enum StStatus st_count_roots_zp(const struct StPoly *p, uint64_t prime_p, uint64_t *out_count);

// Distinct roots in ℚ_p.
//
// # Safety
// Pointers must be valid.
enum StStatus st_count_roots_qp(const struct StPoly *p, uint64_t prime_p, uint64_t *out_count);

// Distinct roots `x` in ℂ_p with `ord_p(x - 1) ≥ r_num / r_den`.
//
// # Safety
// Pointers must be valid.
enum StStatus st_count_roots_in_disk(const struct StPoly *p,
                                     uint64_t prime_p,
                                     int64_t r_num,
                                     int64_t r_den,
                                     uint64_t *out_count);

// Parses a circuit from its JSON form.
//
// # Safety
// `json` must be nul-terminated; `out_circuit` valid.
enum StStatus st_circuit_from_json(const char *json, struct StCircuit **out_circuit);

// Seeded random circuit with `s` gates (exponents ≤ `max_exp`, `|constants|` ≤ `max_const`).
//
// # Safety
// `out_circuit` must be valid.
enum StStatus st_random_circuit(uint32_t s,
                                uint64_t seed,
                                uint64_t max_exp,
                                int64_t max_const,
                                struct StCircuit **out_circuit);

// # Safety
// `c` must come from this library and not have been freed; null is ignored.
void st_circuit_free(struct StCircuit *c);

// JSON form of a circuit.
//
// # Safety
// Pointers must be valid.
enum StStatus st_circuit_to_json(const struct StCircuit *c, char **out_json);

// The polynomial a circuit computes.
//
// # Safety
// Pointers must be valid.
enum StStatus st_circuit_expand(const struct StCircuit *c,
                                uint64_t degree_cap,
                                struct StPoly **out_poly);

// Root counts against every bound, as a JSON report. `*out_all_pass` is 1
// when no bound is violated.
//
// # Safety
// Pointers must be valid.
enum StStatus st_verify_report_json(const struct StCircuit *c,
                                    uint64_t prime_p,
                                    int64_t r_num,
                                    int64_t r_den,
                                    char **out_json,
                                    int32_t *out_all_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGMATAU_H */
