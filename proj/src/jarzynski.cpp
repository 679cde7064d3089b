#include "pmtherm/jarzynski.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pmtherm/parallel.hpp"
#include "pmtherm/random.hpp"

namespace pmtherm {

drive_schedule::drive_schedule(std::function<Operator(double)> hamiltonian_at,
                               std::vector<double> path, double t_final)
    : at_(std::move(hamiltonian_at)), path_(std::move(path)), t_final_(t_final) {
  if (!at_) throw argument_error("drive schedule: no hamiltonian function");
  if (path_.size() < 2) throw argument_error("drive schedule: need at least one step");
  if (!(t_final_ >= 0.0) || !std::isfinite(t_final_))
    throw argument_error("drive schedule: t_final must be finite and non-negative");
  hamiltonians_.reserve(path_.size());
  for (double lambda : path_) {
    Operator h = at_(lambda);
    if (!h.is_hermitian()) throw argument_error("drive schedule: hamiltonian is not hermitian");
    if (!hamiltonians_.empty() && h.dim() != hamiltonians_.front().dim())
      throw argument_error("drive schedule: hamiltonian dimension changes along the path");
    hamiltonians_.push_back(Operator::hermitian((h.matrix() + h.matrix().adjoint()) * 0.5));
  }
}

drive_schedule drive_schedule::linear(const Operator& h0, const Operator& h1, double t_final,
                                      int steps) {
  if (steps < 1) throw argument_error("drive schedule: steps must be at least 1");
  if (h0.dim() != h1.dim()) throw argument_error("drive schedule: endpoint dimensions differ");
  std::vector<double> path(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) path[static_cast<std::size_t>(n)] = double(n) / steps;
  const Matrix a = h0.matrix(), b = h1.matrix();
  return {[a, b](double lambda) { return Operator(Matrix((1.0 - lambda) * a + lambda * b)); },
          std::move(path), t_final};
}

drive_schedule drive_schedule::constant(const Operator& h, double t_final, int steps) {
  return linear(h, h, t_final, steps);
}

drive_schedule drive_schedule::refined(int factor) const {
  if (factor < 1) throw argument_error("drive schedule: refinement factor must be positive");
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(steps() * factor) + 1);
  for (int n = 0; n < steps(); ++n)
    for (int k = 0; k < factor; ++k) {
      const double a = path_[static_cast<std::size_t>(n)];
      const double b = path_[static_cast<std::size_t>(n) + 1];
      p.push_back(a + (b - a) * k / factor);
    }
  p.push_back(path_.back());
  return {at_, std::move(p), t_final_};
}

std::vector<Operator> step_propagators(const drive_schedule& schedule) {
  std::vector<Operator> u;
  u.reserve(static_cast<std::size_t>(schedule.steps()));
  for (int n = 0; n < schedule.steps(); ++n)
    u.push_back(propagator(schedule.hamiltonian(n), schedule.step_duration()));
  return u;
}

Operator total_propagator(const drive_schedule& schedule) {
  Operator u = Operator::identity(schedule.dim());
  for (const auto& step : step_propagators(schedule)) u = step * u;
  return u;
}

// ---------------------------------------------------------------------------

double log_partition_function(const Operator& h, double beta) {
  if (!h.is_hermitian()) throw argument_error("partition function: hamiltonian is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h.matrix() + h.matrix().adjoint()) * 0.5,
                                           Eigen::EigenvaluesOnly);
  const auto& e = es.eigenvalues();
  const double e0 = e.minCoeff();
  double s = 0.0;
  for (Index k = 0; k < e.size(); ++k) s += std::exp(-beta * (e(k) - e0));
  return -beta * e0 + std::log(s);
}

DensityMatrix thermal_state(const Operator& h, double beta) {
  if (!h.is_hermitian()) throw argument_error("thermal_state: hamiltonian is not hermitian");
  if (!(beta >= 0.0)) throw argument_error("thermal_state: beta must be non-negative");
  const Matrix hh = (h.matrix() + h.matrix().adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hh);
  const auto& e = es.eigenvalues();
  const double e0 = e.minCoeff();
  Eigen::VectorXd w(e.size());
  for (Index k = 0; k < e.size(); ++k) w(k) = std::exp(-beta * (e(k) - e0));
  w /= w.sum();
  const auto& v = es.eigenvectors();
  return {detail::trusted_tag{}, Matrix(v * w.cast<complex>().asDiagonal() * v.adjoint()), 1.0};
}

double delta_F(const Operator& h_initial, const Operator& h_final, double beta) {
  if (!(beta > 0.0)) throw argument_error("delta_F: beta must be positive");
  return -(log_partition_function(h_final, beta) - log_partition_function(h_initial, beta)) / beta;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> gibbs_sector_probabilities(const std::vector<energy_sector>& sectors,
                                               double beta) {
  double e0 = sectors.front().energy;
  for (const auto& s : sectors) e0 = std::min(e0, s.energy);
  std::vector<double> p;
  double z = 0.0;
  for (const auto& s : sectors) {
    p.push_back(s.degeneracy * std::exp(-beta * (s.energy - e0)));
    z += p.back();
  }
  for (auto& v : p) v /= z;
  return p;
}

}  // namespace

tpm_table build_tpm_table(const drive_schedule& schedule, double beta) {
  if (!(beta >= 0.0)) throw argument_error("tpm: beta must be non-negative");
  tpm_table t;
  t.initial_sectors = energy_sectors(schedule.initial_hamiltonian());
  t.final_sectors = energy_sectors(schedule.final_hamiltonian());
  t.initial_probabilities = gibbs_sector_probabilities(t.initial_sectors, beta);
  const auto finals = to_projector_set(t.final_sectors);
  const auto steps = step_propagators(schedule);
  for (const auto& s : t.initial_sectors) {
    DensityMatrix rho(detail::trusted_tag{}, Matrix(s.projector.matrix() / s.degeneracy), 1.0);
    for (const auto& u : steps) rho = apply(u, rho);
    auto row = finals.populations(rho);
    for (auto& v : row) v = std::max(0.0, v);
    t.transition.push_back(std::move(row));
  }
  return t;
}

std::vector<work_sample> tpm_sample(const drive_schedule& schedule, double beta,
                                    std::size_t n_samples, std::uint64_t seed,
                                    std::size_t workers) {
  if (n_samples < 1) throw argument_error("tpm_sample: need at least one sample");
  const tpm_table table = build_tpm_table(schedule, beta);
  std::vector<work_sample> out(n_samples);
  for_each_stream(n_samples, workers, [&](std::size_t stream, std::size_t first, std::size_t last) {
    for (std::size_t g = first; g < last; ++g) {
      const std::uint64_t draw = g - first;
      const std::size_t i = rng::pick(table.initial_probabilities,
                                      rng::uniform(rng::derive(seed, stream, draw, 0)));
      const std::size_t f =
          rng::pick(table.transition[i], rng::uniform(rng::derive(seed, stream, draw, 1)));
      const double ei = table.initial_sectors[i].energy;
      const double ef = table.final_sectors[f].energy;
      out[g] = {ei, ef, ef - ei, i, f, stream, draw};
    }
  });
  return out;
}

double jarzynski_exact(const drive_schedule& schedule, double beta) {
  if (!(beta > 0.0)) throw argument_error("jarzynski_exact: beta must be positive");
  const auto initial = energy_sectors(schedule.initial_hamiltonian());
  const auto final_ = energy_sectors(schedule.final_hamiltonian());
  const double log_z0 = log_partition_function(schedule.initial_hamiltonian(), beta);
  const Matrix u = total_propagator(schedule).matrix();
  double acc = 0.0;
  for (const auto& si : initial) {
    const Matrix evolved = u * si.projector.matrix() * u.adjoint();
    const double boltzmann = std::exp(-beta * si.energy - log_z0);
    for (const auto& sf : final_) {
      const auto& pf = sf.projector.matrix();
      const double overlap = (pf * evolved * pf).trace().real();
      acc += boltzmann * overlap * std::exp(-beta * (sf.energy - si.energy));
    }
  }
  return acc;
}

double jarzynski_time_ordered(const drive_schedule& schedule, double beta) {
  if (!(beta > 0.0)) throw argument_error("jarzynski_time_ordered: beta must be positive");
  const Index n = schedule.dim();
  const auto steps = step_propagators(schedule);
  // Heisenberg-picture Hamiltonians at every grid time.
  std::vector<Matrix> heis;
  heis.reserve(steps.size() + 1);
  Matrix u = Matrix::Identity(n, n);
  heis.push_back(schedule.hamiltonian(0).matrix());
  for (int k = 0; k < schedule.steps(); ++k) {
    u = steps[static_cast<std::size_t>(k)].matrix() * u;
    heis.push_back(u.adjoint() * schedule.hamiltonian(k + 1).matrix() * u);
  }
  Matrix ordered = Matrix::Identity(n, n);
  for (std::size_t k = 0; k + 1 < heis.size(); ++k)
    ordered = exp_hermitian<double>(heis[k + 1], -beta) * exp_hermitian<double>(heis[k], beta) *
              ordered;
  const double log_z0 = log_partition_function(schedule.initial_hamiltonian(), beta);
  const Matrix rho0 = exp_hermitian<double>(schedule.initial_hamiltonian().matrix(), -beta);
  const complex v = (ordered * rho0).trace();
  if (std::abs(v.imag()) > 1e-8 * std::max(1.0, std::abs(v.real())))
    throw numerical_error("jarzynski_time_ordered: trace is not real");
  return v.real() / std::exp(log_z0);
}

// ---------------------------------------------------------------------------

std::vector<double> works_of(std::span<const work_sample> samples) {
  std::vector<double> w;
  w.reserve(samples.size());
  for (const auto& s : samples) w.push_back(s.work);
  return w;
}

namespace {

struct moments {
  double mean;
  double standard_error;
};

moments sample_moments(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  const double mean = sum / n;
  if (x.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// Absolute slack so that exactly reproduced values pass with a zero standard error.
constexpr double kExactSlack = 1e-12;

jarzynski_report make_report(std::span<const double> work, double beta, double delta_f,
                             std::span<const double> sigma) {
  if (work.empty()) throw argument_error("jarzynski check: no samples");
  if (!(beta > 0.0)) throw argument_error("jarzynski check: beta must be positive");
  std::vector<double> exponent(work.size()), weight(work.size());
  double sigma_sum = 0.0;
  for (std::size_t k = 0; k < work.size(); ++k) {
    exponent[k] = -beta * work[k] + sigma[k];
    weight[k] = std::exp(exponent[k]);
    sigma_sum += sigma[k];
  }
  const double sigma_mean = sigma_sum / static_cast<double>(work.size());
  const auto est = sample_moments(weight);
  const auto w = sample_moments(work);
  const auto x = sample_moments(exponent);
  const double exact = std::exp(-beta * delta_f);
  const double slack = kExactSlack * std::max(1.0, exact);

  jarzynski_report r{};
  r.estimator_mean = est.mean;
  r.standard_error = est.standard_error;
  r.exact_value = exact;
  r.delta_F = delta_f;
  r.sample_count = work.size();
  r.beta = beta;
  r.sigma_total = sigma_mean;
  r.mean_work = w.mean;
  r.work_standard_error = w.standard_error;
  r.jensen_lhs = std::exp(x.mean);
  r.jensen_rhs = est.mean;
  r.passed = std::abs(est.mean - exact) <= 3.0 * est.standard_error + slack;
  r.inequality_holds =
      w.mean + 3.0 * w.standard_error + kExactSlack >= delta_f + sigma_mean / beta;
  return r;
}

}  // namespace

jarzynski_report jarzynski_equality_check(std::span<const double> work, double beta,
                                          double delta_f) {
  const std::vector<double> zero(work.size(), 0.0);
  return make_report(work, beta, delta_f, zero);
}

jarzynski_report jarzynski_equality_check(std::span<const work_sample> samples, double beta,
                                          double delta_f) {
  const auto w = works_of(samples);
  return jarzynski_equality_check(std::span<const double>(w), beta, delta_f);
}

jarzynski_report modified_jarzynski_check(std::span<const double> work_total, double beta,
                                          double delta_f, double sigma_total) {
  const std::vector<double> s(work_total.size(), sigma_total);
  return make_report(work_total, beta, delta_f, s);
}

jarzynski_report modified_jarzynski_check(std::span<const double> work_total, double beta,
                                          double delta_f, std::span<const double> sigma) {
  if (sigma.size() != work_total.size())
    throw argument_error("modified jarzynski check: sigma count does not match sample count");
  return make_report(work_total, beta, delta_f, sigma);
}

}  // namespace pmtherm
