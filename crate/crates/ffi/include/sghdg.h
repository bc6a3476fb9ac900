#ifndef SGHDG_H
#define SGHDG_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SghdgStatus {
  SGHDG_STATUS_OK = 0,
  // An argument was out of range; nothing was computed.
  SGHDG_STATUS_INVALID_ARGUMENT = 1,
  // The computation itself failed (singular system, no convergence).
  SGHDG_STATUS_NUMERICAL = 2,
  SGHDG_STATUS_NULL_POINTER = 3,
  // The caller's buffer is shorter than the data.
  SGHDG_STATUS_BUFFER_TOO_SMALL = 4,
  // A Rust panic was caught at the boundary.
  SGHDG_STATUS_PANIC = 5,
} SghdgStatus;

// Opaque HDG solution.
typedef struct SghdgHdgSolution SghdgHdgSolution;

// Opaque SG finite-volume solution.
typedef struct SghdgSgSolution SghdgSgSolution;

typedef struct SghdgCoefficients {
  double c1;
  double c2;
  double c3;
  double r;
} SghdgCoefficients;

typedef struct SghdgTau {
  double peclet;
  double delta;
  double tau;
  bool ill_conditioned;
} SghdgTau;

// Constant-coefficient problem `(beta u - alpha u')' = f` on
// `[domain_left, domain_right]` with Dirichlet data.
typedef struct SghdgProblem {
  double alpha;
  double beta;
  double f;
  double u_left;
  double u_right;
  double domain_left;
  double domain_right;
} SghdgProblem;

typedef struct SghdgErrorReport {
  double trace_linf;
  double u_l2;
  double midpoint_linf;
  double flux_l2;
} SghdgErrorReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next call into this library on the same thread.
const char *sghdg_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *sghdg_version(void);

// `B(x) = x / (e^x - 1)`.
//
// # Safety
// `out` must be valid for a write of one `double`.
enum SghdgStatus sghdg_bernoulli(double x, double *out);

// Dimensionless stabilization `delta_k(P)` for any degree.
//
// # Safety
// `out` must be valid for a write of one `double`.
enum SghdgStatus sghdg_delta(size_t k, double peclet, double *out);

// Closed form of `delta_k(P)`, `k <= 4`.
//
// # Safety
// `out` must be valid for a write of one `double`.
enum SghdgStatus sghdg_delta_closed_form(size_t k, double peclet, double *out);

// Coefficients of an interior row of the condensed trace system on the
// reference cell (`alpha = h = 1`).
//
// # Safety
// `out` must be valid for a write of one `SghdgCoefficients`.
enum SghdgStatus sghdg_coefficients(size_t k,
                                    double delta,
                                    double peclet,
                                    struct SghdgCoefficients *out);

// `tau_k = (alpha/h) delta_k(beta h / alpha)`.
//
// # Safety
// `out` must be valid for a write of one `SghdgTau`.
enum SghdgStatus sghdg_sg_tau(size_t k, double h, double alpha, double beta, struct SghdgTau *out);

// Exact solution at `x`.
//
// # Safety
// `problem` must point to a valid `SghdgProblem`; `out` must be valid for
// a write of one `double`.
enum SghdgStatus sghdg_exact_u(const struct SghdgProblem *problem, double x, double *out);

// Solves HDG(k) on a uniform mesh. A non-positive or NaN `tau` selects
// the SG value `tau_k`.
//
// # Safety
// `problem` must point to a valid `SghdgProblem`; `out` must be valid for
// a write of one pointer. On success `*out` owns a handle to be released
// with `sghdg_hdg_free`.
enum SghdgStatus sghdg_hdg_solve(const struct SghdgProblem *problem,
                                 size_t cells,
                                 size_t k,
                                 double tau,
                                 struct SghdgHdgSolution **out);

// # Safety
// `sol` must be NULL or a handle from `sghdg_hdg_solve` not yet freed.
void sghdg_hdg_free(struct SghdgHdgSolution *sol);

// Number of trace values (`cells + 1`); 0 for NULL.
//
// # Safety
// `sol` must be NULL or a live handle.
size_t sghdg_hdg_trace_len(const struct SghdgHdgSolution *sol);

// Copies the trace values into `buf`.
//
// # Safety
// `sol` must be a live handle and `buf` valid for `len` writes.
enum SghdgStatus sghdg_hdg_trace(const struct SghdgHdgSolution *sol, double *buf, size_t len);

// The stabilization parameter the solution was computed with.
//
// # Safety
// `sol` must be a live handle; `out` valid for one write.
enum SghdgStatus sghdg_hdg_tau(const struct SghdgHdgSolution *sol, double *out);

// `u^h(x)`; the left limit at interior nodes.
//
// # Safety
// `sol` must be a live handle; `out` valid for one write.
enum SghdgStatus sghdg_hdg_evaluate_u(const struct SghdgHdgSolution *sol, double x, double *out);

// `J^h(x)`; the left limit at interior nodes.
//
// # Safety
// `sol` must be a live handle; `out` valid for one write.
enum SghdgStatus sghdg_hdg_evaluate_j(const struct SghdgHdgSolution *sol, double x, double *out);

// Errors against the exact solution.
//
// # Safety
// `sol` must be a live handle; `out` valid for one write.
enum SghdgStatus sghdg_hdg_error_report(const struct SghdgHdgSolution *sol,
                                        struct SghdgErrorReport *out);

// Solves the SG finite-volume scheme on the dual of a uniform mesh.
//
// # Safety
// As `sghdg_hdg_solve`; release with `sghdg_sg_free`.
enum SghdgStatus sghdg_sg_solve(const struct SghdgProblem *problem,
                                size_t cells,
                                struct SghdgSgSolution **out);

// # Safety
// `sol` must be NULL or a handle from `sghdg_sg_solve` not yet freed.
void sghdg_sg_free(struct SghdgSgSolution *sol);

// Number of nodal values (`cells + 1`); 0 for NULL.
//
// # Safety
// `sol` must be NULL or a live handle.
size_t sghdg_sg_len(const struct SghdgSgSolution *sol);

// Copies the nodal values into `buf`.
//
// # Safety
// `sol` must be a live handle and `buf` valid for `len` writes.
enum SghdgStatus sghdg_sg_values(const struct SghdgSgSolution *sol, double *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SGHDG_H */
