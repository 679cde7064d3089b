#pragma once

#include <string_view>
#include <vector>

namespace pmtherm {

enum class relaxation_description { direct, statistical, poisson_cutoff };

const char* to_string(relaxation_description d) noexcept;
/// Accepts "direct", "statistical", "poisson" and "poisson_cutoff".
relaxation_description parse_description(std::string_view name);

/// Surviving statistical weight rho(t) of the ensemble without relaxation.
struct relaxation_trajectory {
  std::vector<double> times;
  std::vector<double> weights;
  relaxation_description description;
  double dt;  // characteristic time; the relaxation event sits at t = dt

  /// Weight at the first grid time >= t.
  double weight_at(double t) const;
};

/// Integrator for the Poisson segment t <= dt.
enum class poisson_scheme {
  exponential,  // rho_{k+1} = rho_k exp(-h/dt): exact on the grid
  euler,        // rho_{k+1} = rho_k (1 - h/dt): first order
};

// The time grid is `steps` uniform intervals over [0, horizon] with t = dt
// inserted when it is not already a grid point. The delta kick is delivered
// in the single step that lands on t = dt, so rho(t < dt) = 1 regardless of
// the step count.

/// -d rho / dt = delta: rho = 1 before dt, 0 from dt on.
relaxation_trajectory simulate_direct(double dt, double horizon, int steps);

/// -d rho / dt = delta * rho: rho = 1 before dt, e^{-1} from dt on.
relaxation_trajectory simulate_statistical(double dt, double horizon, int steps);

/// rho = exp(-t/dt) up to the cutoff at t = dt, frozen at e^{-1} afterwards.
relaxation_trajectory simulate_poisson_cutoff(double dt, double horizon, int steps,
                                              poisson_scheme scheme = poisson_scheme::exponential);

relaxation_trajectory simulate(relaxation_description d, double dt, double horizon, int steps);

/// sigma(t) = -ln rho(t). A fully relaxed direct trajectory (rho = 0) maps
/// to +infinity, the documented sentinel for "no surviving weight".
std::vector<double> entropy_of_weight(const relaxation_trajectory& trajectory);

}  // namespace pmtherm
