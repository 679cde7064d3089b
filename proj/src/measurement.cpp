#include "pmtherm/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pmtherm/random.hpp"
#include "pmtherm/superselection.hpp"

namespace pmtherm {

namespace {

Operator fourier_momentum(Index n, double step) {
  Matrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Index k = 0; k < n; ++k)
    for (Index m = 0; m < n; ++m)
      f(k, m) = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(m * k) /
                                     static_cast<double>(n));
  Vector p(n);
  for (Index m = 0; m < n; ++m) {
    const Index mm = (2 * m <= n) ? m : m - n;
    p(m) = 2.0 * std::numbers::pi * static_cast<double>(mm) / (static_cast<double>(n) * step);
  }
  return Operator::hermitian(f * p.asDiagonal() * f.adjoint());
}

}  // namespace

// ---------------------------------------------------------------------------

pointer_model::pointer_model(Index pointer_dim, double coupling, double duration, double step)
    : dim_(pointer_dim),
      coupling_(coupling),
      duration_(duration),
      step_(step),
      momentum_(Operator::zero(pointer_dim > 0 ? pointer_dim : 1)) {
  if (pointer_dim <= 0) throw argument_error("pointer model: dimension must be positive");
  if (!(coupling > 0.0)) throw argument_error("pointer model: coupling must be positive");
  if (!(duration > 0.0)) throw argument_error("pointer model: duration must be positive");
  if (!(step > 0.0)) throw argument_error("pointer model: grid step must be positive");
  positions_.resize(static_cast<std::size_t>(dim_));
  for (Index k = 0; k < dim_; ++k)
    positions_[static_cast<std::size_t>(k)] = step_ * static_cast<double>(k - origin_index());
  momentum_ = fourier_momentum(dim_, step_);
}

Operator pointer_model::position() const { return Operator::diagonal(positions_); }

Index pointer_model::shifted_index(Index points) const {
  return ((origin_index() + points) % dim_ + dim_) % dim_;
}

Operator von_neumann_hamiltonian(const Operator& obs, const pointer_model& model) {
  if (!obs.is_hermitian()) throw argument_error("von_neumann_hamiltonian: obs is not hermitian");
  const Operator h = tensor(Operator::hermitian(obs.matrix()), model.momentum());
  return Operator::hermitian(-model.coupling() * h.matrix());
}

std::vector<Index> pointer_shifts(const Operator& obs, const pointer_model& model) {
  if (!obs.is_hermitian()) throw argument_error("pointer_shifts: obs is not hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((obs.matrix() + obs.matrix().adjoint()) * 0.5,
                                           Eigen::EigenvaluesOnly);
  std::vector<Index> out;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double s = -model.duration() * model.coupling() * es.eigenvalues()(k) / model.step();
    const double r = std::round(s);
    if (std::abs(s - r) > policy().commensurability_tol)
      throw commensurability_error(fmt::format(
          "pointer shift {} grid points for eigenvalue {} is not an integer", s,
          es.eigenvalues()(k)));
    out.push_back(static_cast<Index>(r));
  }
  return out;
}

Operator pointer_interaction(const Operator& obs, const pointer_model& model) {
  pointer_shifts(obs, model);
  return propagator(von_neumann_hamiltonian(obs, model), model.duration());
}

Ket entangle_pointer(const Ket& system_state, const Ket& ready_pointer, const Operator& obs,
                     const pointer_model& model) {
  if (system_state.dim() != obs.dim())
    throw argument_error("entangle_pointer: system state and observable dimensions differ");
  if (ready_pointer.dim() != model.dim())
    throw argument_error("entangle_pointer: pointer dimension mismatch");
  if (std::abs(std::norm(ready_pointer[model.origin_index()]) - 1.0) > policy().norm_tol)
    throw precondition_error("entangle_pointer: ready pointer is not localized at the origin");
  const Operator u = pointer_interaction(obs, model);
  return apply(u, tensor(system_state, ready_pointer));
}

// ---------------------------------------------------------------------------

DensityMatrix nonselective_measure(const DensityMatrix& rho, const projector_set& outcomes) {
  if (outcomes.dim() != rho.dim())
    throw argument_error("nonselective_measure: dimension mismatch");
  if (!outcomes.is_complete())
    throw argument_error("nonselective_measure: outcome projectors are incomplete");
  return {detail::trusted_tag{}, outcomes.pinch(rho.matrix()), rho.trace_weight()};
}

truncation_result truncate_direct(const DensityMatrix& rho) {
  return {Matrix::Zero(rho.dim(), rho.dim()), rho.trace_weight()};
}

truncation_result truncate_statistical(const DensityMatrix& rho) {
  const double survive = std::exp(-1.0);
  return {survive * rho.matrix(), rho.trace_weight() * (1.0 - survive)};
}

DensityMatrix statistical_channel(const DensityMatrix& rho, const projector_set& outcomes,
                                  double kick) {
  if (kick < 0.0 || kick > 1.0) throw argument_error("statistical_channel: kick outside [0, 1]");
  const DensityMatrix pinched = nonselective_measure(rho, outcomes);
  return {detail::trusted_tag{}, Matrix((1.0 - kick) * rho.matrix() + kick * pinched.matrix()),
          rho.trace_weight()};
}

// ---------------------------------------------------------------------------

const char* to_string(entropy_cause c) noexcept {
  switch (c) {
    case entropy_cause::event_reading:
      return "event_reading";
    case entropy_cause::energy_event_reading:
      return "energy_event_reading";
    case entropy_cause::none:
      return "none";
  }
  return "none";
}

void entropy_ledger::record_pair(const std::string& reader, const std::string& measured,
                                 double sigma, entropy_cause cause) {
  if (reader == measured) throw argument_error("ledger: reader and measured system coincide");
  entries_.push_back({reader, sigma, cause});
  entries_.push_back({measured, -sigma, cause});
}

double entropy_ledger::total(const std::string& system) const {
  double t = 0.0;
  for (const auto& e : entries_)
    if (e.system == system) t += e.sigma;
  return t;
}

std::map<std::string, double> entropy_ledger::totals() const {
  std::map<std::string, double> t;
  for (const auto& e : entries_) t[e.system] += e.sigma;
  return t;
}

double entropy_ledger::grand_total() const {
  double t = 0.0;
  for (const auto& e : entries_) t += e.sigma;
  return t;
}

bool entropy_ledger::all_zero() const {
  for (const auto& e : entries_)
    if (e.sigma != 0.0) return false;
  return true;
}

// ---------------------------------------------------------------------------

std::vector<double> born_probabilities(const DensityMatrix& rho, const projector_set& outcomes) {
  auto p = outcomes.populations(rho);
  for (auto& v : p) v = std::max(0.0, v / rho.trace_weight());
  return p;
}

DensityMatrix collapse(const DensityMatrix& rho, const projector_set& outcomes, std::size_t y) {
  const Matrix projected = outcomes.project(rho.matrix(), y);
  const double weight = projected.trace().real();
  if (!(weight > 0.0)) throw degenerate_distribution_error("collapse: outcome has zero weight");
  return {detail::trusted_tag{}, Matrix(projected / weight), 1.0};
}

event_read_result event_read(const DensityMatrix& rho, const projector_set& outcomes,
                             std::uint64_t seed, entropy_ledger ledger,
                             const std::string& s_label, const std::string& m_label,
                             entropy_cause cause) {
  if (outcomes.dim() != rho.dim()) throw argument_error("event_read: dimension mismatch");
  if (!outcomes.is_complete())
    throw argument_error("event_read: outcome projectors are incomplete");
  const Matrix pinched = outcomes.pinch(rho.matrix());
  if (max_deviation(pinched, rho.matrix()) > policy().coherence_tol)
    throw precondition_error(
        "event_read: state carries coherence between outcomes; apply nonselective_measure first");

  const double floor = policy().probability_floor;
  // A state whose raw outcome weights all fall below the floor carries no
  // usable distribution, whatever its normalization.
  const auto raw = outcomes.populations(rho);
  if (std::none_of(raw.begin(), raw.end(), [floor](double v) { return v > floor; }))
    throw degenerate_distribution_error("event_read: every outcome probability is negligible");
  const auto p = born_probabilities(rho, outcomes);
  std::size_t nonzero = 0;
  for (double v : p)
    if (v > floor) ++nonzero;

  const std::size_t chosen = rng::pick(p, rng::uniform(seed), floor);

  const double sigma = nonzero > 1 ? 1.0 : 0.0;
  ledger.record_pair(m_label, s_label, sigma, nonzero > 1 ? cause : entropy_cause::none);
  return {chosen,
          outcomes.labels()[chosen],
          p[chosen],
          collapse(rho, outcomes, chosen),
          std::move(ledger),
          sigma};
}

// ---------------------------------------------------------------------------

redefined_system redefine_system(const DensityMatrix& rho, const std::vector<Operator>& observables,
                                 double sigma) {
  if (!std::isfinite(sigma)) throw argument_error("redefine_system: sigma must be finite");
  std::vector<Operator> obs;
  obs.reserve(observables.size());
  for (const auto& o : observables) obs.push_back(o.scaled(std::exp(sigma)));
  return {rho.scaled(std::exp(-sigma)), std::move(obs)};
}

double generalized_relative_entropy(const DensityMatrix& rho, const DensityMatrix& rho_star) {
  if (rho.dim() != rho_star.dim())
    throw argument_error("generalized_relative_entropy: dimension mismatch");
  const double tol = policy().support_tol;

  Eigen::SelfAdjointEigenSolver<Matrix> star(rho_star.matrix());
  const auto& lam = star.eigenvalues();
  const auto& v = star.eigenvectors();
  double cross = 0.0;  // tr[rho ln rho*]
  for (Index k = 0; k < lam.size(); ++k) {
    const double w = (v.col(k).adjoint() * rho.matrix() * v.col(k))(0, 0).real();
    if (lam(k) <= tol) {
      if (w > tol)
        throw domain_error("generalized_relative_entropy: support of rho exceeds support of rho*");
      continue;
    }
    cross += w * std::log(lam(k));
  }

  Eigen::SelfAdjointEigenSolver<Matrix> self(rho.matrix(), Eigen::EigenvaluesOnly);
  double entropy_term = 0.0;  // tr[rho ln rho]
  for (Index k = 0; k < self.eigenvalues().size(); ++k) {
    const double l = self.eigenvalues()(k);
    if (l > 0.0) entropy_term += l * std::log(l);
  }
  return entropy_term - cross;
}

double work_event_reading(double temperature, double sigma) {
  if (!(temperature > 0.0)) throw argument_error("work_event_reading: temperature must be positive");
  return temperature * sigma;
}

// ---------------------------------------------------------------------------

Ket trigger_state(const Ket& amplitudes, const std::vector<double>& meter_values,
                  double displacement) {
  if (static_cast<Index>(meter_values.size()) != amplitudes.dim())
    throw argument_error("trigger_state: meter value count does not match amplitude count");
  Vector v(amplitudes.dim());
  for (Index n = 0; n < v.size(); ++n)
    v(n) = amplitudes[n] * std::polar(1.0, -displacement * meter_values[static_cast<std::size_t>(n)]);
  return Ket(std::move(v));
}

bool phase_equivalence_trigger(const std::vector<phase_displacement>& branch_phases,
                               const std::vector<double>& meter_values, const Ket& amplitudes) {
  if (branch_phases.size() < 2) return true;
  const Ket ref = trigger_state(amplitudes, meter_values, branch_phases.front().displacement);
  for (std::size_t b = 1; b < branch_phases.size(); ++b) {
    const Ket other = trigger_state(amplitudes, meter_values, branch_phases[b].displacement);
    for (Index n = 0; n < ref.dim(); ++n)
      if (std::abs(std::norm(ref[n]) - std::norm(other[n])) > 1e-14) return false;
  }
  return true;
}

}  // namespace pmtherm
