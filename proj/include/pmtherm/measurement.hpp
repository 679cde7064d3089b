#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pmtherm/linalg.hpp"
#include "pmtherm/projectors.hpp"

namespace pmtherm {

// ---------------------------------------------------------------------------
// Pointer model

/// Cyclic position grid with a hermitian momentum generator.
///
/// Grid point k sits at step * (k - origin_index), origin_index = dim / 2.
/// The momentum operator is built in the discrete Fourier basis so that
/// exp(-i s P) translates the grid by exactly s / step points (mod dim) for
/// every integer multiple s of step.
class pointer_model {
 public:
  pointer_model(Index pointer_dim, double coupling, double duration, double step = 1.0);

  Index dim() const noexcept { return dim_; }
  double coupling() const noexcept { return coupling_; }
  double duration() const noexcept { return duration_; }
  double step() const noexcept { return step_; }
  Index origin_index() const noexcept { return dim_ / 2; }

  const std::vector<double>& positions() const noexcept { return positions_; }
  const Operator& momentum() const noexcept { return momentum_; }
  /// Diagonal position operator on the grid.
  Operator position() const;

  /// Pointer localized at the grid origin.
  Ket ready_state() const { return Ket::basis(dim_, origin_index()); }

  /// Grid index reached from the origin after a shift of `points` steps.
  Index shifted_index(Index points) const;

 private:
  Index dim_;
  double coupling_;
  double duration_;
  double step_;
  std::vector<double> positions_;
  Operator momentum_;
};

/// -coupling * obs (x) P on system (x) pointer.
Operator von_neumann_hamiltonian(const Operator& obs, const pointer_model& model);

/// Grid shift, in points, applied to the pointer for each eigenvalue of obs
/// (ascending eigenvalue order): -duration * coupling * o / step.
///
/// Throws commensurability_error if any shift is not an integer.
std::vector<Index> pointer_shifts(const Operator& obs, const pointer_model& model);

/// exp(-i H duration) for H = von_neumann_hamiltonian(obs, model), after the
/// commensurability check.
Operator pointer_interaction(const Operator& obs, const pointer_model& model);

/// sum_n c_n |O_n>|0>  ->  sum_n c_n |O_n>|-duration*coupling*O_n>.
///
/// Free Hamiltonians are ignored for the interaction window.
Ket entangle_pointer(const Ket& system_state, const Ket& ready_pointer, const Operator& obs,
                     const pointer_model& model);

// ---------------------------------------------------------------------------
// Channels

/// sum_y P(y) rho P(y). Requires a complete family.
DensityMatrix nonselective_measure(const DensityMatrix& rho, const projector_set& outcomes);

/// Output of a truncated relaxation channel and its missing trace.
struct truncation_result {
  Matrix output;
  double trace_deficit;
};

/// Direct description: the non-selective output is replaced by zero.
truncation_result truncate_direct(const DensityMatrix& rho);

/// Statistical description: the non-selective term is dropped and the
/// surviving weight after the unit kick is e^{-1}.
truncation_result truncate_statistical(const DensityMatrix& rho);

/// (1 - kick) rho + kick * sum_y P(y) rho P(y): the untruncated statistical
/// step, which is trace preserving for any kick in [0, 1].
DensityMatrix statistical_channel(const DensityMatrix& rho, const projector_set& outcomes,
                                  double kick);

// ---------------------------------------------------------------------------
// Entropy ledger

enum class entropy_cause { event_reading, energy_event_reading, none };

const char* to_string(entropy_cause c) noexcept;

struct ledger_entry {
  std::string system;
  double sigma;  // nats
  entropy_cause cause;
};

/// Append-only record of entropy production per system.
///
/// Entries are always written in (+sigma reader, -sigma measured) pairs, so
/// every pair and the grand total sum to zero exactly.
class entropy_ledger {
 public:
  void record_pair(const std::string& reader, const std::string& measured, double sigma,
                   entropy_cause cause);

  const std::vector<ledger_entry>& entries() const noexcept { return entries_; }
  double total(const std::string& system) const;
  std::map<std::string, double> totals() const;
  double grand_total() const;
  bool all_zero() const;

 private:
  std::vector<ledger_entry> entries_;
};

// ---------------------------------------------------------------------------
// Event reading

struct event_read_result {
  std::size_t outcome;
  std::string label;
  double probability;
  DensityMatrix collapsed;
  entropy_ledger ledger;
  double sigma;  // 1 for a genuine reading, 0 when only one outcome is possible
};

/// Born-rule selection of one outcome from an already dephased state.
///
/// Outcome y is drawn with probability tr[P(y) rho] / trace_weight by
/// inverse CDF over the projector order; a uniform landing exactly on a CDF
/// boundary selects the lower index. The returned ledger gains
/// (m_label, +sigma) and (s_label, -sigma), with sigma = 0 when a single
/// outcome has nonzero probability.
event_read_result event_read(const DensityMatrix& rho, const projector_set& outcomes,
                             std::uint64_t seed, entropy_ledger ledger,
                             const std::string& s_label, const std::string& m_label,
                             entropy_cause cause = entropy_cause::event_reading);

/// P(y) rho P(y) / tr[P(y) rho P(y)], with unit trace weight.
DensityMatrix collapse(const DensityMatrix& rho, const projector_set& outcomes, std::size_t y);

/// Outcome probabilities tr[P(y) rho] / trace_weight.
std::vector<double> born_probabilities(const DensityMatrix& rho, const projector_set& outcomes);

// ---------------------------------------------------------------------------
// Redefinitions by entropy production

struct redefined_system {
  DensityMatrix rho_star;
  std::vector<Operator> observables_star;
};

/// rho* = e^{-sigma} rho and O* = e^{sigma} O, so tr[O* rho*] = tr[O rho].
redefined_system redefine_system(const DensityMatrix& rho, const std::vector<Operator>& observables,
                                 double sigma);

/// tr[rho ln rho - rho ln rho*] in nats. May be negative when rho* is a
/// redefined (non-unit-trace) ensemble.
///
/// Throws domain_error unless supp(rho) is contained in supp(rho*).
double generalized_relative_entropy(const DensityMatrix& rho, const DensityMatrix& rho_star);

/// k_B T sigma with k_B = 1.
double work_event_reading(double temperature, double sigma);

// ---------------------------------------------------------------------------
// Event-reading trigger

/// Displacement delta_mu Xi_A of the rearranged coordinate origin in one
/// branch of the condensate.
struct phase_displacement {
  double displacement;
  std::string branch_label;
};

/// sum_n c_n exp(-i * displacement * M_n) |M_n>.
Ket trigger_state(const Ket& amplitudes, const std::vector<double>& meter_values,
                  double displacement);

/// True when every branch displacement yields the same Born distribution in
/// the meter basis (within 1e-14) as the first one.
bool phase_equivalence_trigger(const std::vector<phase_displacement>& branch_phases,
                               const std::vector<double>& meter_values, const Ket& amplitudes);

}  // namespace pmtherm
