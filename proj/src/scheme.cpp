#include "pmtherm/scheme.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "pmtherm/parallel.hpp"
#include "pmtherm/random.hpp"
#include "pmtherm/superselection.hpp"

namespace pmtherm {

namespace {

const std::string kS0 = "S0";
const std::string kAprime = "Aprime";
const std::string kPsi = "psi";
const std::string kA = "A";

const std::vector<std::string> kSystemLabels{kS0, kAprime};
const std::vector<std::string> kMeterLabels{kPsi, kA};

// Pointer shifts must land on distinct grid points, else the record is lost.
void require_distinct_shifts(const Operator& obs, const pointer_model& model, const char* what) {
  std::set<Index> seen;
  for (Index s : pointer_shifts(obs, model)) {
    const Index r = ((s % model.dim()) + model.dim()) % model.dim();
    if (!seen.insert(r).second)
      throw argument_error(fmt::format(
          "scheme: {} pointer of dimension {} cannot separate the observable's eigenvalues", what,
          model.dim()));
  }
}

barrier_model effective_barrier(const scheme_config& c) {
  barrier_model b = c.barrier;
  if (c.eigenstate_prep) {
    b.tunneling_initial = 0.0;
    b.tunneling_final = 0.0;
    if (b.bias_initial == 0.0 && b.bias_final == 0.0) {
      b.bias_initial = 1.0;
      b.bias_final = 2.0;
    }
  }
  return b;
}

Operator with_identity(const Operator& h, Index dim) {
  return Operator::hermitian(tensor(h, Operator::identity(dim)).matrix());
}

projector_set energy_projectors(const std::vector<energy_sector>& sectors,
                                const composite_space& space) {
  return projector_set::embedded(to_projector_set(sectors), space, kSystemLabels);
}

std::vector<double> energies_of(const std::vector<energy_sector>& sectors) {
  std::vector<double> e;
  for (const auto& s : sectors) e.push_back(s.energy);
  return e;
}

Matrix branch_block(const Operator& entangler, Index n, Index m, Index dpsi) {
  return entangler.matrix().block(n * dpsi, m * dpsi, dpsi, dpsi);
}

}  // namespace

// ---------------------------------------------------------------------------

Operator barrier_model::hamiltonian(double lambda) const {
  const double j = (1.0 - lambda) * tunneling_initial + lambda * tunneling_final;
  const double b = (1.0 - lambda) * bias_initial + lambda * bias_final;
  Matrix h(2, 2);
  h << 0.5 * b, -j, -j, -0.5 * b;
  return Operator::hermitian(std::move(h));
}

drive_schedule barrier_model::schedule() const {
  if (steps < 1) throw argument_error("barrier: steps must be positive");
  std::vector<double> path(static_cast<std::size_t>(steps) + 1);
  for (int n = 0; n <= steps; ++n) path[static_cast<std::size_t>(n)] = double(n) / steps;
  const barrier_model self = *this;
  return {[self](double lambda) { return self.hamiltonian(lambda); }, std::move(path), t_final};
}

Matrix controlled_shift(Index control_dim, Index target_dim,
                        const std::vector<std::vector<double>>& phases) {
  if (control_dim <= 0 || target_dim <= 0)
    throw argument_error("controlled_shift: dimensions must be positive");
  const Index n = control_dim * target_dim;
  Matrix u = Matrix::Zero(n, n);
  for (Index c = 0; c < control_dim; ++c)
    for (Index m = 0; m < target_dim; ++m) {
      double phase = 0.0;
      if (!phases.empty()) phase = phases.at(static_cast<std::size_t>(c)).at(static_cast<std::size_t>(m));
      u(c * target_dim + (m + c) % target_dim, c * target_dim + m) = std::polar(1.0, phase);
    }
  return u;
}

// ---------------------------------------------------------------------------

scheme::scheme(scheme_config config)
    : config_(std::move(config)),
      space_({{kS0, 2},
              {kAprime, config_.cells},
              {kPsi, static_cast<Index>(config_.meter_values.size())},
              {kA, config_.pointer_dim}}),
      schedule_(effective_barrier(config_).schedule()),
      observable_(Operator::diagonal(config_.observable_values)),
      meter_(Operator::diagonal(config_.meter_values)),
      nsm_pointer_(config_.cells, config_.nsm_coupling, config_.nsm_duration),
      event_pointer_(config_.pointer_dim, config_.event_coupling, config_.event_duration),
      entangler_(Operator::identity(1)),
      u_drive_(Operator::identity(1)),
      u_nsm_(Operator::identity(1)),
      u_entangle_(Operator::identity(1)),
      u_event_(Operator::identity(1)),
      initial_sectors_({Operator::projector(Matrix::Identity(1, 1))}, {"0"}),
      final_sectors_({Operator::projector(Matrix::Identity(1, 1))}, {"0"}),
      nsm_sectors_({Operator::projector(Matrix::Identity(1, 1))}, {"0"}),
      meter_sectors_({Operator::projector(Matrix::Identity(1, 1))}, {"0"}),
      observable_sectors_({Operator::projector(Matrix::Identity(1, 1))}, {"0"}) {
  const auto& c = config_;
  if (!(c.beta > 0.0) || !std::isfinite(c.beta)) throw argument_error("scheme: beta must be positive");
  if (c.observable_values.size() != 2)
    throw argument_error("scheme: S0 is two-dimensional, observable needs two values");
  if (c.observable_values[0] == c.observable_values[1])
    throw argument_error("scheme: observable values must differ");
  if (c.meter_values.size() < 2) throw argument_error("scheme: meter needs at least two values");
  if (std::set<double>(c.meter_values.begin(), c.meter_values.end()).size() != c.meter_values.size())
    throw argument_error("scheme: meter values must differ");
  if (c.n_samples == 0) throw argument_error("scheme: n_samples must be positive");

  require_distinct_shifts(observable_, nsm_pointer_, "A'");
  require_distinct_shifts(meter_, event_pointer_, "A");

  const Index dpsi = space_.dim_of(kPsi);
  entangler_ = Operator::unitary(c.entangler ? *c.entangler : controlled_shift(2, dpsi));
  if (entangler_.dim() != 2 * dpsi)
    throw argument_error("scheme: entangler must act on S0 (x) psi");

  const Operator u_s0 = total_propagator(schedule_);
  u_drive_ = embed(u_s0, space_, {kS0});
  u_nsm_ = embed(pointer_interaction(observable_, nsm_pointer_), space_, {kS0, kAprime});
  u_entangle_ = embed(entangler_, space_, {kS0, kPsi});
  u_event_ = embed(pointer_interaction(meter_, event_pointer_), space_, {kPsi, kA});

  const auto e0 = energy_sectors(system_hamiltonian(0.0));
  const auto e1 = energy_sectors(system_hamiltonian(1.0));
  initial_sectors_ = energy_projectors(e0, space_);
  final_sectors_ = energy_projectors(e1, space_);
  initial_energies_ = energies_of(e0);
  final_energies_ = energies_of(e1);

  nsm_sectors_ = projector_set::embedded(
      projector_set::product(projector_set::computational(2),
                             projector_set::computational(c.cells)),
      space_, kSystemLabels);
  meter_sectors_ = projector_set::embedded(projector_set::computational(dpsi), space_, {kPsi});
  observable_sectors_ = projector_set::embedded(projector_set::computational(2), space_, {kS0});
}

Operator scheme::system_hamiltonian(double lambda) const {
  return with_identity(schedule_.hamiltonian_at()(lambda), config_.cells);
}

DensityMatrix scheme::marginal_s(const DensityMatrix& rho) const {
  return partial_trace(rho, space_, kSystemLabels);
}

DensityMatrix scheme::marginal_m(const DensityMatrix& rho) const {
  return partial_trace(rho, space_, kMeterLabels);
}

DensityMatrix scheme::ready_m() const {
  const Ket meter0 = Ket::basis(space_.dim_of(kPsi), 0);
  return DensityMatrix::pure(tensor(meter0, event_pointer_.ready_state()));
}

double scheme::delta_F() const {
  return pmtherm::delta_F(system_hamiltonian(0.0), system_hamiltonian(1.0), config_.beta);
}

// ---------------------------------------------------------------------------

DensityMatrix step_I_prepare(const scheme& sch) {
  return tensor(thermal_state(sch.system_hamiltonian(0.0), sch.config().beta), sch.ready_m());
}

DensityMatrix step_II_barrier(const scheme& sch, const DensityMatrix& state) {
  if (state.dim() != sch.space().total_dim())
    throw argument_error("step II: state does not live on the scheme space");
  return apply(sch.drive_unitary(), state);
}

DensityMatrix step_III_nonselective(const scheme& sch, const DensityMatrix& state) {
  if (state.dim() != sch.space().total_dim())
    throw argument_error("step III: state does not live on the scheme space");
  return dephase(apply(sch.nsm_unitary(), state), sch.nsm_sectors());
}

DensityMatrix step_IV_entangle(const scheme& sch, const DensityMatrix& state) {
  if (state.dim() != sch.space().total_dim())
    throw argument_error("step IV: state does not live on the scheme space");
  const DensityMatrix before = sch.marginal_s(state);
  DensityMatrix out = apply(sch.entangle_unitary(), state);
  const DensityMatrix after = sch.marginal_s(out);
  const double dev = max_deviation(before.matrix(), after.matrix());
  if (dev > policy().hermitian_tol) {
    const auto pb = sch.observable_sectors().populations(state);
    const auto pa = sch.observable_sectors().populations(out);
    throw scheme_constraint_error(fmt::format(
        "step IV changed the S marginal by {:.3e}; O-branch populations before ({:.17g}, "
        "{:.17g}), after ({:.17g}, {:.17g})",
        dev, pb[0], pb[1], pa[0], pa[1]));
  }
  return out;
}

step_V_result step_V_event_read(const scheme& sch, const DensityMatrix& state,
                                entropy_ledger ledger, std::uint64_t seed) {
  if (state.dim() != sch.space().total_dim())
    throw argument_error("step V: state does not live on the scheme space");
  const DensityMatrix dephased =
      nonselective_measure(apply(sch.event_unitary(), state), sch.meter_sectors());
  auto r = event_read(dephased, sch.meter_sectors(), seed, std::move(ledger), kSystemS, kSystemM);
  return {r.outcome, r.probability, r.sigma, std::move(r.collapsed), std::move(r.ledger)};
}

// ---------------------------------------------------------------------------

namespace {

struct reading {
  std::string reader;
  double sigma;
  entropy_cause cause;
};

void finish_record(const scheme& sch, scheme_run_record& rec, const std::vector<reading>& readings,
                   double sigma_m) {
  // Accounting is active only when the O reading by M is genuine; otherwise
  // every reading of the run counts as 0 nat.
  rec.accounting_active = sigma_m > 0.0;
  const double temperature = sch.temperature();
  for (const auto& r : readings) {
    const double s = rec.accounting_active ? r.sigma : 0.0;
    rec.ledger.record_pair(r.reader, kSystemS, s, s > 0.0 ? r.cause : entropy_cause::none);
    rec.sigma_total += s;
    if (r.reader == kExperimenter)
      rec.w_er_experimenter += work_event_reading(temperature, s);
    else
      rec.w_er_m += work_event_reading(temperature, s);
  }
  rec.w_drive = rec.final_energy - rec.initial_energy;
  rec.w_total = rec.w_drive + rec.w_er_experimenter + rec.w_er_m;
}

scheme_run_record run_impl(const scheme& sch, std::uint64_t root, std::uint64_t stream,
                           std::uint64_t draw, bool keep) {
  const auto& c = sch.config();
  scheme_run_record rec;
  rec.stream_id = stream;
  rec.draw_id = draw;
  auto keep_state = [&](const DensityMatrix& s) {
    if (keep) rec.states.push_back(s);
  };

  std::vector<reading> readings;
  DensityMatrix rho = step_I_prepare(sch);
  keep_state(rho);

  auto r0 = event_read(rho, sch.initial_energy_sectors(), rng::derive(root, stream, draw, 0), {},
                       kSystemS, kExperimenter, entropy_cause::energy_event_reading);
  rec.initial_sector = r0.outcome;
  rec.initial_energy = sch.initial_energies()[r0.outcome];
  readings.push_back({kExperimenter, r0.sigma, entropy_cause::energy_event_reading});
  rho = std::move(r0.collapsed);
  keep_state(rho);

  rho = step_II_barrier(sch, rho);
  keep_state(rho);

  double sigma_m = 0.0;
  if (c.enable_measurement) {
    rho = step_III_nonselective(sch, rho);
    keep_state(rho);
    rho = step_IV_entangle(sch, rho);
    keep_state(rho);
    auto r5 = step_V_event_read(sch, rho, {}, rng::derive(root, stream, draw, 1));
    rec.event_outcome = static_cast<int>(r5.outcome);
    sigma_m = r5.sigma;
    readings.push_back({kSystemM, r5.sigma, entropy_cause::event_reading});
    rho = std::move(r5.collapsed);
    keep_state(rho);
  }

  const DensityMatrix dephased = nonselective_measure(rho, sch.final_energy_sectors());
  auto rf = event_read(dephased, sch.final_energy_sectors(), rng::derive(root, stream, draw, 2),
                       {}, kSystemS, kExperimenter, entropy_cause::energy_event_reading);
  rec.final_sector = rf.outcome;
  rec.final_energy = sch.final_energies()[rf.outcome];
  readings.push_back({kExperimenter, rf.sigma, entropy_cause::energy_event_reading});
  keep_state(rf.collapsed);

  finish_record(sch, rec, readings, sigma_m);
  return rec;
}

// Every run is fixed by its three outcomes, so the Born distributions of the
// readings are evaluated once per branch with the same step functions and
// runs only draw from them.
struct reading_node {
  std::vector<double> p;
  double sigma = 0.0;
};

reading_node node_of(const DensityMatrix& rho, const projector_set& outcomes) {
  reading_node n{born_probabilities(rho, outcomes), 0.0};
  std::size_t nonzero = 0;
  for (double v : n.p)
    if (v > policy().probability_floor) ++nonzero;
  if (nonzero == 0) throw degenerate_distribution_error("scheme: every outcome probability is negligible");
  n.sigma = nonzero > 1 ? 1.0 : 0.0;
  return n;
}

struct branch_table {
  reading_node initial;
  std::vector<reading_node> event;               // [i]
  std::vector<std::vector<reading_node>> final;  // [i][n], n = 0 without steps III to V
};

branch_table build_branch_table(const scheme& sch) {
  const double floor = policy().probability_floor;
  branch_table t;
  const DensityMatrix rho0 = step_I_prepare(sch);
  t.initial = node_of(rho0, sch.initial_energy_sectors());
  const std::size_t ni = t.initial.p.size();
  t.event.resize(ni);
  t.final.resize(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    if (!(t.initial.p[i] > floor)) continue;
    DensityMatrix rho = step_II_barrier(sch, collapse(rho0, sch.initial_energy_sectors(), i));
    auto final_node = [&](const DensityMatrix& r) {
      return node_of(nonselective_measure(r, sch.final_energy_sectors()),
                     sch.final_energy_sectors());
    };
    if (!sch.config().enable_measurement) {
      t.final[i].push_back(final_node(rho));
      continue;
    }
    rho = step_IV_entangle(sch, step_III_nonselective(sch, rho));
    const DensityMatrix dephased =
        nonselective_measure(apply(sch.event_unitary(), rho), sch.meter_sectors());
    t.event[i] = node_of(dephased, sch.meter_sectors());
    t.final[i].resize(t.event[i].p.size());
    for (std::size_t n = 0; n < t.event[i].p.size(); ++n)
      if (t.event[i].p[n] > floor)
        t.final[i][n] = final_node(collapse(dephased, sch.meter_sectors(), n));
  }
  return t;
}

std::size_t draw_from(const reading_node& node, std::uint64_t seed) {
  return rng::pick(node.p, rng::uniform(seed), policy().probability_floor);
}

scheme_run_record sample_record(const scheme& sch, const branch_table& t, std::uint64_t root,
                                std::uint64_t stream, std::uint64_t draw) {
  scheme_run_record rec;
  rec.stream_id = stream;
  rec.draw_id = draw;
  std::vector<reading> readings;
  const std::size_t i = draw_from(t.initial, rng::derive(root, stream, draw, 0));
  rec.initial_sector = i;
  rec.initial_energy = sch.initial_energies()[i];
  readings.push_back({kExperimenter, t.initial.sigma, entropy_cause::energy_event_reading});
  double sigma_m = 0.0;
  std::size_t n = 0;
  if (sch.config().enable_measurement) {
    n = draw_from(t.event[i], rng::derive(root, stream, draw, 1));
    rec.event_outcome = static_cast<int>(n);
    sigma_m = t.event[i].sigma;
    readings.push_back({kSystemM, sigma_m, entropy_cause::event_reading});
  }
  const reading_node& fin = t.final[i][n];
  const std::size_t f = draw_from(fin, rng::derive(root, stream, draw, 2));
  rec.final_sector = f;
  rec.final_energy = sch.final_energies()[f];
  readings.push_back({kExperimenter, fin.sigma, entropy_cause::energy_event_reading});
  finish_record(sch, rec, readings, sigma_m);
  return rec;
}

}  // namespace

scheme_run_record run_once(const scheme& sch, std::uint64_t stream, std::uint64_t draw) {
  return run_impl(sch, sch.config().seed, stream, draw, sch.config().keep_states);
}

scheme_result run_scheme(const scheme& sch, std::size_t workers) {
  const std::size_t n = sch.config().n_samples;
  scheme_result out;
  out.runs.resize(n);
  const bool keep = sch.config().keep_states;
  const branch_table table = keep ? branch_table{} : build_branch_table(sch);
  const std::uint64_t root = sch.config().seed;
  for_each_stream(n, workers, [&](std::size_t stream, std::size_t first, std::size_t last) {
    for (std::size_t g = first; g < last; ++g)
      out.runs[g] = keep ? run_impl(sch, root, stream, g % kStreamBlock, true)
                         : sample_record(sch, table, root, stream, g % kStreamBlock);
  });

  std::vector<double> w(n), wt(n), sigma(n);
  for (std::size_t g = 0; g < n; ++g) {
    w[g] = out.runs[g].w_drive;
    wt[g] = out.runs[g].w_total;
    sigma[g] = out.runs[g].sigma_total;
  }
  const double beta = sch.config().beta;
  out.delta_F = sch.delta_F();
  out.original = jarzynski_equality_check(w, beta, out.delta_F);
  out.modified = modified_jarzynski_check(wt, beta, out.delta_F, sigma);
  out.mean_w_drive = out.original.mean_work;
  out.mean_w_total = out.modified.mean_work;
  out.extra_work = out.mean_w_total - out.mean_w_drive;
  return out;
}

// ---------------------------------------------------------------------------

appendix_b_report verify_appendix_b(const scheme& sch, std::uint64_t seed) {
  if (!sch.config().enable_measurement)
    throw argument_error("verify_appendix_b: steps III to V are disabled");
  const double tol = 1e-12;
  const auto& space = sch.space();
  const Index dpsi = space.dim_of(kPsi);
  const scheme_run_record rec = run_impl(sch, seed, 0, 0, true);
  // states: I, TPM-0, II, III, IV, V, TPM-f
  const DensityMatrix& rho3 = rec.states[3];
  const DensityMatrix& rho4 = rec.states[4];
  const DensityMatrix& rho5 = rec.states[5];
  const Matrix rho5_pre = sch.event_unitary().matrix() * rho4.matrix() *
                          sch.event_unitary().matrix().adjoint();

  appendix_b_report rep;
  rep.event_outcome = rec.event_outcome;

  rep.deviation_a = max_deviation(
      rho3.matrix(), tensor(sch.marginal_s(rho3), sch.marginal_m(rho3)).matrix());
  rep.stage_a = rep.deviation_a <= tol;

  // The entangler must act as a unitary on psi inside each O branch.
  double offdiag = 0.0;
  for (Index n = 0; n < 2; ++n)
    for (Index m = 0; m < 2; ++m)
      if (n != m) offdiag = std::max(offdiag, detail::max_abs(branch_block(sch.entangler(), n, m, dpsi)));
  const bool controlled = offdiag <= tol;

  const DensityMatrix ready_m = sch.ready_m();
  auto branch_target = [&](const Operator& pn, double p) {
    const Matrix s = pn.matrix() * rho3.matrix() * pn.matrix() / p;
    return Matrix(tensor(sch.marginal_s(DensityMatrix(detail::trusted_tag{}, s, 1.0)), ready_m).matrix());
  };
  auto undo_iv = [&](Index n) {
    const Operator local = Operator(branch_block(sch.entangler(), n, n, dpsi)).adjoint();
    return embed(local, space, {kPsi}).matrix();
  };
  const Matrix undo_v = sch.event_unitary().matrix().adjoint();

  const auto& sectors = sch.observable_sectors();
  const auto pops = sectors.populations(rho3);
  const double floor = policy().probability_floor;
  double dev_b = controlled ? 0.0 : std::numeric_limits<double>::infinity();
  double dev_c = dev_b;
  if (controlled) {
    for (std::size_t n = 0; n < sectors.size(); ++n) {
      if (!(pops[n] > floor)) continue;
      const Matrix& pn = sectors[n].matrix();
      const Matrix target = branch_target(sectors[n], pops[n]);
      const Matrix v4 = undo_iv(static_cast<Index>(n));
      const Matrix b4 = pn * rho4.matrix() * pn / pops[n];
      dev_b = std::max(dev_b, max_deviation(Matrix(v4 * b4 * v4.adjoint()), target));
      const Matrix v5 = v4 * undo_v;
      const Matrix b5 = pn * rho5_pre * pn / pops[n];
      dev_c = std::max(dev_c, max_deviation(Matrix(v5 * b5 * v5.adjoint()), target));
    }
  }
  rep.deviation_b = dev_b;
  rep.deviation_c = dev_c;
  rep.stage_b = dev_b <= tol;
  rep.stage_c = dev_c <= tol;

  // Branch selected by the reading: the O sector holding the collapsed weight.
  const auto post = sectors.populations(rho5);
  std::size_t n0 = 0;
  for (std::size_t n = 1; n < post.size(); ++n)
    if (post[n] > post[n0]) n0 = n;
  if (controlled && std::abs(post[n0] - 1.0) <= tol) {
    const Matrix v5 = undo_iv(static_cast<Index>(n0)) * undo_v;
    rep.deviation_d = max_deviation(Matrix(v5 * rho5.matrix() * v5.adjoint()),
                                    branch_target(sectors[n0], pops[n0]));
  } else {
    rep.deviation_d = std::numeric_limits<double>::infinity();
  }
  rep.stage_d = rep.deviation_d <= tol;
  return rep;
}

}  // namespace pmtherm
