#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pmtherm/linalg.hpp"
#include "pmtherm/superselection.hpp"

namespace pmtherm {

/// Hamiltonian path H(lambda_{t_n}) sampled at t_n = n t_f / N, n = 0..N.
///
/// The Hamiltonians are evaluated once at construction and must all be
/// hermitian with a common dimension.
class drive_schedule {
 public:
  drive_schedule(std::function<Operator(double)> hamiltonian_at, std::vector<double> path,
                 double t_final);

  /// H(lambda) = (1 - lambda) h0 + lambda h1 with lambda_n = n / N.
  static drive_schedule linear(const Operator& h0, const Operator& h1, double t_final, int steps);
  static drive_schedule constant(const Operator& h, double t_final, int steps);

  int steps() const noexcept { return static_cast<int>(path_.size()) - 1; }
  double t_final() const noexcept { return t_final_; }
  double step_duration() const noexcept { return t_final_ / steps(); }
  Index dim() const noexcept { return hamiltonians_.front().dim(); }
  const std::vector<double>& path() const noexcept { return path_; }

  const Operator& hamiltonian(int n) const { return hamiltonians_.at(static_cast<std::size_t>(n)); }
  const Operator& initial_hamiltonian() const { return hamiltonians_.front(); }
  const Operator& final_hamiltonian() const { return hamiltonians_.back(); }
  const std::function<Operator(double)>& hamiltonian_at() const noexcept { return at_; }

  /// Same control path with every step split into `factor` sub-steps,
  /// lambda linearly interpolated inside each step.
  drive_schedule refined(int factor) const;

 private:
  std::function<Operator(double)> at_;
  std::vector<double> path_;
  double t_final_;
  std::vector<Operator> hamiltonians_;
};

/// U_n = exp(-i H(lambda_{t_n}) t_f / N) for n = 0..N-1.
std::vector<Operator> step_propagators(const drive_schedule& schedule);

/// U_{N-1} ... U_1 U_0.
Operator total_propagator(const drive_schedule& schedule);

struct work_sample {
  double initial_energy;
  double final_energy;
  double work;  // final_energy - initial_energy
  std::size_t initial_outcome_index;
  std::size_t final_outcome_index;
  std::uint64_t stream_id;
  std::uint64_t draw_id;
};

struct jarzynski_report {
  double estimator_mean;  // mean of exp(-beta W + sigma_total)
  double standard_error;
  double exact_value;     // exp(-beta delta_F)
  double delta_F;
  std::size_t sample_count;
  double beta;
  double sigma_total;     // 0 for the original equality
  double mean_work;
  double work_standard_error;
  double jensen_lhs;      // exp(mean(-beta W + sigma_total))
  double jensen_rhs;      // mean(exp(-beta W + sigma_total))
  bool passed;            // |mean - exact| within 3 standard errors
  bool inequality_holds;  // <W> >= delta_F + sigma_total / beta within 3 standard errors
};

/// exp(-beta h) / Z.
DensityMatrix thermal_state(const Operator& h, double beta);

/// ln tr exp(-beta h), evaluated with a ground-energy shift.
double log_partition_function(const Operator& h, double beta);

/// -(1/beta) ln(Z_final / Z_initial).
double delta_F(const Operator& h_initial, const Operator& h_final, double beta);

/// Energy sectors at both ends of a schedule and the TPM transition table.
struct tpm_table {
  std::vector<energy_sector> initial_sectors;
  std::vector<energy_sector> final_sectors;
  std::vector<double> initial_probabilities;          // Gibbs weight of each initial sector
  std::vector<std::vector<double>> transition;        // [i][f] = tr[P_f rho_i(t_f)]
};

/// Collapses the Gibbs state into each initial sector (full sector projector,
/// renormalized), evolves it step by step and records final-sector
/// populations.
tpm_table build_tpm_table(const drive_schedule& schedule, double beta);

/// TPM work samples. Sample g uses stream g / kStreamBlock and draw
/// g % kStreamBlock; output order and values do not depend on `workers`.
std::vector<work_sample> tpm_sample(const drive_schedule& schedule, double beta,
                                    std::size_t n_samples, std::uint64_t seed,
                                    std::size_t workers = 0);

/// <exp(-beta W)> by enumerating (initial sector, final sector) pairs:
/// sum_{i,f} e^{-beta E_i}/Z_0 tr[P_f U P_i U^dagger P_f] e^{-beta (E'_f - E_i)}.
double jarzynski_exact(const drive_schedule& schedule, double beta);

/// The same average from the time-ordered operator product:
/// tr[ T prod_n e^{-beta H_H(t_{n+1})} e^{beta H_H(t_n)} e^{-beta H_0} ] / Z_0
/// with Heisenberg-picture Hamiltonians H_H(t_n) = U(t_n)^dagger H(lambda_n) U(t_n).
double jarzynski_time_ordered(const drive_schedule& schedule, double beta);

std::vector<double> works_of(std::span<const work_sample> samples);

jarzynski_report jarzynski_equality_check(std::span<const double> work, double beta,
                                          double delta_f);
jarzynski_report jarzynski_equality_check(std::span<const work_sample> samples, double beta,
                                          double delta_f);

/// Checks mean(exp(-beta W_total + sigma_total)) against exp(-beta delta_F)
/// and <W_total> >= delta_F + sigma_total k_B T. `work_total` already
/// contains the injected event-reading work.
jarzynski_report modified_jarzynski_check(std::span<const double> work_total, double beta,
                                          double delta_f, double sigma_total = 3.0);

/// Per-sample entropy production. sigma_total in the report is the mean.
jarzynski_report modified_jarzynski_check(std::span<const double> work_total, double beta,
                                          double delta_f, std::span<const double> sigma);

}  // namespace pmtherm
