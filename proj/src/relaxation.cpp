#include "pmtherm/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "pmtherm/errors.hpp"

namespace pmtherm {

namespace {

std::vector<double> time_grid(double dt, double horizon, int steps) {
  if (!(dt > 0.0)) throw argument_error("relaxation: dt must be positive");
  if (!(horizon >= dt)) throw argument_error("relaxation: horizon must be at least dt");
  if (steps < 1) throw argument_error("relaxation: steps must be at least 1");
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(steps) + 2);
  for (int k = 0; k <= steps; ++k) t.push_back(horizon * k / steps);
  t.back() = horizon;
  // Snap a grid point that misses dt by rounding only; otherwise insert dt.
  auto it = std::lower_bound(t.begin(), t.end(), dt);
  if (it != t.end() && std::abs(*it - dt) <= 1e-12 * dt)
    *it = dt;
  else if (it != t.begin() && std::abs(*(it - 1) - dt) <= 1e-12 * dt)
    *(it - 1) = dt;
  else
    t.insert(it, dt);
  return t;
}

}  // namespace

const char* to_string(relaxation_description d) noexcept {
  switch (d) {
    case relaxation_description::direct:
      return "direct";
    case relaxation_description::statistical:
      return "statistical";
    case relaxation_description::poisson_cutoff:
      return "poisson";
  }
  return "direct";
}

relaxation_description parse_description(std::string_view name) {
  if (name == "direct") return relaxation_description::direct;
  if (name == "statistical") return relaxation_description::statistical;
  if (name == "poisson" || name == "poisson_cutoff") return relaxation_description::poisson_cutoff;
  throw argument_error(fmt::format("unknown relaxation description '{}'", name));
}

double relaxation_trajectory::weight_at(double t) const {
  // Right-continuous step read: the value at the last grid time <= t.
  auto it = std::upper_bound(times.begin(), times.end(), t + 1e-12 * std::max(1.0, std::abs(t)));
  if (it == times.begin()) return weights.front();
  return weights[static_cast<std::size_t>(it - times.begin()) - 1];
}

relaxation_trajectory simulate_direct(double dt, double horizon, int steps) {
  relaxation_trajectory tr{time_grid(dt, horizon, steps), {}, relaxation_description::direct, dt};
  tr.weights.reserve(tr.times.size());
  double rho = 1.0;
  tr.weights.push_back(rho);
  for (std::size_t k = 1; k < tr.times.size(); ++k) {
    if (tr.times[k] == dt) rho -= 1.0;  // -d rho = 1
    tr.weights.push_back(rho);
  }
  return tr;
}

relaxation_trajectory simulate_statistical(double dt, double horizon, int steps) {
  relaxation_trajectory tr{time_grid(dt, horizon, steps), {}, relaxation_description::statistical,
                           dt};
  tr.weights.reserve(tr.times.size());
  double rho = 1.0;
  tr.weights.push_back(rho);
  for (std::size_t k = 1; k < tr.times.size(); ++k) {
    // d ln rho = -d theta = -1 across the kick
    if (tr.times[k] == dt) rho *= std::exp(-1.0);
    tr.weights.push_back(rho);
  }
  return tr;
}

relaxation_trajectory simulate_poisson_cutoff(double dt, double horizon, int steps,
                                              poisson_scheme scheme) {
  relaxation_trajectory tr{time_grid(dt, horizon, steps), {},
                           relaxation_description::poisson_cutoff, dt};
  tr.weights.reserve(tr.times.size());
  double rho = 1.0;
  tr.weights.push_back(rho);
  for (std::size_t k = 1; k < tr.times.size(); ++k) {
    const double t = tr.times[k];
    if (t < dt) {
      const double h = (t - tr.times[k - 1]) / dt;
      rho *= scheme == poisson_scheme::exponential ? std::exp(-h) : (1.0 - h);
    } else {
      rho = std::exp(-1.0);  // cutoff at the mean occurrence time
    }
    tr.weights.push_back(rho);
  }
  return tr;
}

relaxation_trajectory simulate(relaxation_description d, double dt, double horizon, int steps) {
  switch (d) {
    case relaxation_description::direct:
      return simulate_direct(dt, horizon, steps);
    case relaxation_description::statistical:
      return simulate_statistical(dt, horizon, steps);
    case relaxation_description::poisson_cutoff:
      return simulate_poisson_cutoff(dt, horizon, steps);
  }
  throw argument_error("unknown relaxation description");
}

std::vector<double> entropy_of_weight(const relaxation_trajectory& trajectory) {
  std::vector<double> sigma;
  sigma.reserve(trajectory.weights.size());
  for (double rho : trajectory.weights)
    sigma.push_back(rho > 0.0 ? 0.0 - std::log(rho) : std::numeric_limits<double>::infinity());
  return sigma;
}

}  // namespace pmtherm
