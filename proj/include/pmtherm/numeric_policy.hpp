#pragma once

#include <cstddef>

namespace pmtherm {

/// Every tolerance used by the library, in one place.
///
/// The defaults are the values the test-suite is written against. The CLI
/// may override them once at start-up; after that the record is read-only.
struct numeric_policy {
  double hermitian_tol = 1e-12;      // max |M - M^dagger|
  double unitary_tol = 1e-10;        // max |M^dagger M - I|
  double projector_tol = 1e-10;      // max |M^2 - M|
  double norm_tol = 1e-12;           // | ||psi||^2 - 1 |
  double trace_tol = 1e-12;          // | tr(rho) - trace_weight |
  double eigenvalue_floor = -1e-10;  // smallest admissible density eigenvalue
  double imaginary_tol = 1e-10;      // residue allowed in real-valued traces
  double completeness_tol = 1e-10;   // max |sum P - I|
  double coherence_tol = 1e-10;      // off-sector magnitude counted as coherent
  double support_tol = 1e-10;        // support containment for relative entropy
  double probability_floor = 1e-14;  // outcome probabilities below are zero
  double grouping_tol = 1e-8;        // energy clustering, relative to range
  double commensurability_tol = 1e-9;
  std::size_t max_dim = 4096;
};

/// Current policy. Defaults to numeric_policy{}.
const numeric_policy& policy() noexcept;

/// Replace the policy. Not thread-safe; call before any worker starts.
void set_policy(const numeric_policy& p) noexcept;

}  // namespace pmtherm
