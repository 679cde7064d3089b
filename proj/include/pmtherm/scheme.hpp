#pragma once

// End-to-end driver for the five-step measurement scheme.
//
// Subsystems, in tensor order:
//   S0   two-site box (|L>, |R>) carrying the measured observable O = diag(+1, -1)
//   A'   macroscopic apparatus, `cells` Planck cells, degenerate in energy
//   psi  event-reading system with meter M = diag(meter_values)
//   A    condensate pointer, reduced to a cyclic position grid
// S = S0 + A' is the system whose work is measured; M = psi + A reads it.
//
// Steps (with the experimenter's energy readings around them):
//   TPM-0  projective energy reading of S (event reading by the experimenter)
//   II     barrier-raising drive on S0
//   III    von Neumann coupling S0 -> A', then dephasing in (O, cell) sectors
//   IV     entangler on S0 (x) psi, required to leave the S marginal intact
//   V      von Neumann coupling psi -> A, dephasing in M sectors, event reading
//   TPM-f  projective energy reading of S (second experimenter reading)

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmtherm/jarzynski.hpp"
#include "pmtherm/linalg.hpp"
#include "pmtherm/measurement.hpp"
#include "pmtherm/projectors.hpp"

namespace pmtherm {

inline const std::string kSystemS = "S";
inline const std::string kSystemM = "M";
inline const std::string kExperimenter = "experimenter";

/// Two-site tight-binding S0: H(lambda) = -J(lambda) (|L><R| + |R><L|)
/// + b(lambda)/2 (|L><L| - |R><R|), with J and b linear in lambda in [0, 1].
/// Raising the barrier lowers the tunneling amplitude J.
struct barrier_model {
  double tunneling_initial = 1.0;
  double tunneling_final = 0.1;
  double bias_initial = 0.0;
  double bias_final = 0.0;
  double t_final = 5.0;
  int steps = 200;

  Operator hamiltonian(double lambda) const;
  drive_schedule schedule() const;
};

struct scheme_config {
  double beta = 1.0;
  int cells = 4;        // A' dimension
  int pointer_dim = 4;  // A dimension
  barrier_model barrier{};
  std::vector<double> observable_values{1.0, -1.0};  // O on S0
  std::vector<double> meter_values{1.0, -1.0};       // M on psi
  double nsm_coupling = 1.0;
  double nsm_duration = 1.0;
  double event_coupling = 1.0;
  double event_duration = 1.0;
  /// Unitary on S0 (x) psi (S0 major). Defaults to the controlled shift
  /// |O_n>|M_m> -> |O_n>|M_{m+n}>.
  std::optional<Matrix> entangler;
  std::size_t n_samples = 10000;
  std::uint64_t seed = 7;
  /// Prepare S0 in O eigenstates: tunneling switched off, bias kept on.
  bool eigenstate_prep = false;
  /// Steps III to V; off gives the plain TPM protocol.
  bool enable_measurement = true;
  /// Keep per-step composite states in every run record.
  bool keep_states = false;
};

/// |n>|m> -> exp(i phase[n][m]) |n>|(m + n) mod target_dim> on control (x)
/// target. Empty phases means zero.
Matrix controlled_shift(Index control_dim, Index target_dim,
                        const std::vector<std::vector<double>>& phases = {});

/// Validated scheme: composite space, operators and projector families.
class scheme {
 public:
  explicit scheme(scheme_config config);

  const scheme_config& config() const noexcept { return config_; }
  const composite_space& space() const noexcept { return space_; }
  double temperature() const noexcept { return 1.0 / config_.beta; }

  const drive_schedule& barrier_schedule() const noexcept { return schedule_; }
  /// H^S(lambda) = H_S0(lambda) (x) I_A'.
  Operator system_hamiltonian(double lambda) const;
  const Operator& observable() const noexcept { return observable_; }
  const Operator& meter() const noexcept { return meter_; }
  const pointer_model& nsm_pointer() const noexcept { return nsm_pointer_; }
  const pointer_model& event_pointer() const noexcept { return event_pointer_; }
  const Operator& entangler() const noexcept { return entangler_; }

  /// Full-space unitaries of steps II to V.
  const Operator& drive_unitary() const noexcept { return u_drive_; }
  const Operator& nsm_unitary() const noexcept { return u_nsm_; }
  const Operator& entangle_unitary() const noexcept { return u_entangle_; }
  const Operator& event_unitary() const noexcept { return u_event_; }

  const projector_set& initial_energy_sectors() const noexcept { return initial_sectors_; }
  const projector_set& final_energy_sectors() const noexcept { return final_sectors_; }
  const std::vector<double>& initial_energies() const noexcept { return initial_energies_; }
  const std::vector<double>& final_energies() const noexcept { return final_energies_; }
  const projector_set& nsm_sectors() const noexcept { return nsm_sectors_; }
  const projector_set& meter_sectors() const noexcept { return meter_sectors_; }
  const projector_set& observable_sectors() const noexcept { return observable_sectors_; }

  /// Reduced states on S and on M.
  DensityMatrix marginal_s(const DensityMatrix& rho) const;
  DensityMatrix marginal_m(const DensityMatrix& rho) const;

  /// Ready state of M: |M_0><M_0| (x) pointer at origin.
  DensityMatrix ready_m() const;

  /// Free-energy difference of S between the ends of the barrier drive.
  double delta_F() const;

 private:
  scheme_config config_;
  composite_space space_;
  drive_schedule schedule_;
  Operator observable_;
  Operator meter_;
  pointer_model nsm_pointer_;
  pointer_model event_pointer_;
  Operator entangler_;
  Operator u_drive_;
  Operator u_nsm_;
  Operator u_entangle_;
  Operator u_event_;
  projector_set initial_sectors_;
  projector_set final_sectors_;
  std::vector<double> initial_energies_;
  std::vector<double> final_energies_;
  projector_set nsm_sectors_;
  projector_set meter_sectors_;
  projector_set observable_sectors_;
};

// Individual steps. Each returns a new state.

/// Gibbs state of S (x) ready state of M.
DensityMatrix step_I_prepare(const scheme& sch);
/// Barrier-raising drive on S0 only.
DensityMatrix step_II_barrier(const scheme& sch, const DensityMatrix& state);
/// Non-selective measurement of O by A'.
DensityMatrix step_III_nonselective(const scheme& sch, const DensityMatrix& state);
/// Entangling S0 with psi. Throws scheme_constraint_error if the S marginal
/// moves by more than the hermitian tolerance.
DensityMatrix step_IV_entangle(const scheme& sch, const DensityMatrix& state);

struct step_V_result {
  std::size_t outcome;
  double probability;
  double sigma;
  DensityMatrix collapsed;
  entropy_ledger ledger;
};
/// psi -> A coupling, dephasing in meter sectors, then the event reading.
step_V_result step_V_event_read(const scheme& sch, const DensityMatrix& state,
                                entropy_ledger ledger, std::uint64_t seed);

struct scheme_run_record {
  std::uint64_t stream_id = 0;
  std::uint64_t draw_id = 0;
  std::size_t initial_sector = 0;
  double initial_energy = 0.0;
  int event_outcome = -1;  // -1 when steps III to V are disabled
  std::size_t final_sector = 0;
  double final_energy = 0.0;
  entropy_ledger ledger;
  bool accounting_active = false;
  double sigma_total = 0.0;  // nats summed over readers
  double w_drive = 0.0;
  double w_er_experimenter = 0.0;
  double w_er_m = 0.0;
  double w_total = 0.0;  // w_drive + event-reading works
  /// After I, TPM-0, II, III, IV, V, TPM-f (only with keep_states).
  std::vector<DensityMatrix> states;
};

/// One complete run with seeds derived from (root seed, stream, draw).
scheme_run_record run_once(const scheme& sch, std::uint64_t stream, std::uint64_t draw);

struct scheme_result {
  std::vector<scheme_run_record> runs;
  double delta_F = 0.0;
  jarzynski_report original;  // on W_drive
  jarzynski_report modified;  // on W_total with the run's sigma
  double mean_w_drive = 0.0;
  double mean_w_total = 0.0;
  double extra_work = 0.0;  // mean_w_total - mean_w_drive
};

scheme_result run_scheme(const scheme& sch, std::size_t workers = 0);

struct appendix_b_report {
  bool stage_a = false;
  bool stage_b = false;
  bool stage_c = false;
  bool stage_d = false;
  double deviation_a = 0.0;
  double deviation_b = 0.0;
  double deviation_c = 0.0;
  double deviation_d = 0.0;
  int event_outcome = -1;
  bool passed() const noexcept { return stage_a && stage_b && stage_c && stage_d; }
};

/// Round-trip checks of the branch unitaries on one run of the scheme.
///
/// (a) S and M factor before step IV. (b) After step IV, undoing the
/// branch-conditional entangler returns M to its ready state in every O
/// branch and leaves the S branch untouched. (c) Same after step V with the
/// step-V unitary undone first. (d) The branch selected by the event reading
/// passes the round trip of (c).
appendix_b_report verify_appendix_b(const scheme& sch, std::uint64_t seed);

}  // namespace pmtherm
