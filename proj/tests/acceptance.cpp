// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pmtherm/io.hpp"
#include "pmtherm/jarzynski.hpp"
#include "pmtherm/measurement.hpp"
#include "pmtherm/relaxation.hpp"
#include "pmtherm/scheme.hpp"
#include "support.hpp"

using namespace pmtherm;
using namespace testing_support;

namespace {

struct outcome {
  bool ok;
  std::string detail;
};

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

outcome relaxation_values() {
  const auto st = simulate_statistical(1.0, 3.0, 1000);
  const auto sig = entropy_of_weight(st);
  const double rho = st.weight_at(1.0);
  bool ok = std::abs(rho - std::exp(-1.0)) <= 1e-12;
  for (std::size_t k = 0; k < st.times.size(); ++k)
    if (st.times[k] >= 1.0) ok = ok && sig[k] == 1.0;
  const auto po = simulate_poisson_cutoff(1.0, 3.0, 1000);
  ok = ok && std::abs(po.weight_at(1.0) - std::exp(-1.0)) <= 1e-12;
  const double direct = simulate_direct(1.0, 3.0, 1000).weight_at(1.0);
  ok = ok && direct == 0.0;
  return {ok, fmt::format("statistical rho(dt)={:.17g}, direct rho(dt)={}", rho, direct)};
}

outcome original_equality() {
  bool ok = true;
  double worst = 0.0;
  for (double beta : {0.2, 1.0, 3.7})
    for (double eps : {0.5, 1.0, 2.0}) {
      const auto sch = drive_schedule::linear(Operator::diagonal({0.0, eps, 2.5 * eps}),
                                              Operator::diagonal({0.0, 2 * eps, 1.5 * eps}), 1.0, 5);
      const double z0 = 1 + std::exp(-beta * eps) + std::exp(-2.5 * beta * eps);
      const double z1 = 1 + std::exp(-2 * beta * eps) + std::exp(-1.5 * beta * eps);
      const double dev = std::abs(jarzynski_exact(sch, beta) - z1 / z0);
      worst = std::max(worst, dev);
      ok = ok && dev <= 1e-10;
    }
  const auto sch = drive_schedule::linear(Operator::hermitian(Matrix(0.5 * pauli_z())),
                                          Operator::hermitian(Matrix(pauli_z() + 0.7 * pauli_x())), 2.0, 400);
  const double df = delta_F(sch.initial_hamiltonian(), sch.final_hamiltonian(), 1.0);
  const double target = std::exp(-df);
  const double exact = jarzynski_exact(sch, 1.0);
  ok = ok && std::abs(exact - target) <= 1e-6;
  const auto rep = jarzynski_equality_check(tpm_sample(sch, 1.0, 100000, 42), 1.0, df);
  ok = ok && rep.passed;
  return {ok, fmt::format("commuting max dev {:.2e}; driven qubit exact dev {:.2e}, estimator {:.6f} +- {:.6f} vs {:.6f}",
                          worst, std::abs(exact - target), rep.estimator_mean, rep.standard_error, target)};
}

outcome modified_equality(const scheme_result& res) {
  const bool ok = res.modified.passed && res.modified.inequality_holds && res.modified.sigma_total == 3.0 &&
                  std::abs(res.extra_work - 3.0) <= 1e-12;
  return {ok, fmt::format("mean exp(-bW+3s)={:.6f} +- {:.6f} vs {:.6f}; extra work {:.17g}",
                          res.modified.estimator_mean, res.modified.standard_error, res.modified.exact_value,
                          res.extra_work)};
}

outcome ledger_conservation(const scheme_result& res) {
  bool ok = true;
  for (const auto& r : res.runs) {
    const auto& e = r.ledger.entries();
    ok = ok && e.size() % 2 == 0;
    for (std::size_t k = 0; k + 1 < e.size(); k += 2) ok = ok && e[k].sigma + e[k + 1].sigma == 0.0;
    ok = ok && r.ledger.total(kExperimenter) == 2.0 && r.ledger.total(kSystemM) == 1.0 &&
         r.ledger.total(kSystemS) == -3.0 && r.ledger.grand_total() == 0.0;
  }
  scheme_config c;
  c.eigenstate_prep = true;
  const auto eig = run_scheme(scheme{c});
  std::size_t zero = 0;
  for (const auto& r : eig.runs) zero += r.ledger.all_zero() && r.sigma_total == 0.0;
  ok = ok && zero == eig.runs.size();
  return {ok, fmt::format("{} runs at (+2, +1, -3); eigenstate prep all-zero in {}/{} runs", res.runs.size(), zero,
                          eig.runs.size())};
}

outcome relative_entropy_identities() {
  std::mt19937_64 g(501);
  double worst_s = 0.0, worst_o = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 16;
    const DensityMatrix rho(random_density(g, n));
    const Operator obs = Operator::hermitian(random_hermitian(g, n));
    worst_s = std::max(worst_s, std::abs(generalized_relative_entropy(rho, rho.scaled(std::exp(-1.0))) - 1.0));
    worst_s = std::max(worst_s, std::abs(generalized_relative_entropy(rho, rho.scaled(std::exp(1.0))) + 1.0));
    for (double sigma : {1.0, 3.0}) {
      const auto red = redefine_system(rho, {obs}, sigma);
      worst_o = std::max(worst_o, std::abs(expectation(red.observables_star[0], red.rho_star) - expectation(obs, rho)));
    }
  }
  // Unit trace weight, as the deficits are absolute.
  const DensityMatrix rho(random_density(g, 5), 1.0);
  const double d_direct = truncate_direct(rho).trace_deficit;
  const double d_stat = truncate_statistical(rho).trace_deficit;
  const bool ok = worst_s <= 1e-10 && worst_o <= 1e-12 && d_direct == 1.0 && d_stat == 1.0 - std::exp(-1.0);
  return {ok, fmt::format("relative entropy dev {:.2e}, expectation dev {:.2e}, deficits {} and {:.17g}", worst_s,
                          worst_o, d_direct, d_stat)};
}

outcome measurement_channel() {
  std::mt19937_64 g(601);
  double trace_dev = 0.0, idem_dev = 0.0, min_eig = 1.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 2 + trial % 15;
    const DensityMatrix rho(random_density(g, n));
    const Matrix u = random_unitary(g, n);
    std::vector<Operator> ps;
    std::vector<std::string> labels;
    // Random coarse-graining of a random basis into up to 4 sectors.
    const Index k = 1 + static_cast<Index>(g() % std::min<Index>(n, 4));
    std::vector<Matrix> acc(static_cast<std::size_t>(k), Matrix::Zero(n, n));
    for (Index c = 0; c < n; ++c) acc[static_cast<std::size_t>(c % k)] += u.col(c) * u.col(c).adjoint();
    for (Index s = 0; s < k; ++s) {
      ps.push_back(Operator::projector(acc[static_cast<std::size_t>(s)]));
      labels.push_back(std::to_string(s));
    }
    const projector_set set(ps, labels);
    const auto once = nonselective_measure(rho, set);
    const auto twice = nonselective_measure(once, set);
    trace_dev = std::max(trace_dev, std::abs(once.matrix().trace().real() - rho.matrix().trace().real()));
    idem_dev = std::max(idem_dev, max_deviation(once.matrix(), twice.matrix()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(once.matrix(), Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  const std::vector<double> p{0.5, 0.3, 0.2};
  const DensityMatrix rho(Operator::diagonal(p).matrix());
  const auto set = projector_set::computational(3);
  const std::size_t draws = 1000000;
  std::vector<double> counts(3, 0.0);
  for (std::size_t k = 0; k < draws; ++k) counts[event_read(rho, set, k, {}, "S", "M").outcome] += 1.0;
  double chi2 = 0.0;
  for (std::size_t y = 0; y < 3; ++y) {
    const double e = p[y] * double(draws);
    chi2 += (counts[y] - e) * (counts[y] - e) / e;
  }
  // Two degrees of freedom: survival function exp(-x / 2).
  const double pvalue = std::exp(-chi2 / 2.0);
  const bool ok = trace_dev <= 1e-12 && idem_dev <= 1e-12 && min_eig >= -1e-12 && pvalue > 0.001;
  return {ok, fmt::format("trace dev {:.2e}, idempotence dev {:.2e}, min eigenvalue {:.2e}; chi2 {:.3f} p={:.4f}",
                          trace_dev, idem_dev, min_eig, chi2, pvalue)};
}

outcome pointer_model_checks() {
  std::mt19937_64 g(701);
  double worst = 0.0;
  struct case_t {
    std::vector<double> obs;
    Index dim;
    double coupling, duration, step;
  };
  const std::vector<case_t> cases{{{1.0, -1.0}, 6, 1.0, 1.0, 1.0},
                                  {{1.0, 0.0, -1.0}, 8, 2.0, 1.0, 1.0},
                                  {{2.0, -1.0, 0.5}, 9, 1.0, 1.0, 0.5},
                                  {{1.0, -1.0}, 4, 0.5, 2.0, 1.0}};
  for (const auto& c : cases) {
    const pointer_model m(c.dim, c.coupling, c.duration, c.step);
    const Operator o = Operator::diagonal(c.obs);
    const Matrix u = series_propagator(von_neumann_hamiltonian(o, m).matrix(), m.duration());
    for (int trial = 0; trial < 5; ++trial) {
      const Ket sys(random_vector(g, static_cast<Index>(c.obs.size())));
      const Ket out = entangle_pointer(sys, m.ready_state(), o, m);
      worst = std::max(worst, max_abs(Matrix(out.amplitudes() - u * tensor(sys, m.ready_state()).amplitudes())));
    }
  }
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  const std::vector<double> meter{1.5, 0.5, -0.5, -1.5};
  int equivalent = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Ket c(random_vector(g, 4));
    equivalent += phase_equivalence_trigger({{d(g), "a"}, {d(g), "b"}}, meter, c);
  }
  return {worst <= 1e-10 && equivalent == 100,
          fmt::format("branch map dev {:.2e}; trigger equivalent in {}/100 pairs", worst, equivalent)};
}

outcome step_iv_constraint() {
  std::mt19937_64 g(801);
  const scheme s{scheme_config{}};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix sa = tensor(DensityMatrix(random_density(g, 2)), DensityMatrix::maximally_mixed(s.config().cells));
    const auto rho = step_III_nonselective(s, tensor(sa, s.ready_m()));
    const auto out = step_IV_entangle(s, rho);
    worst = std::max(worst, max_deviation(s.marginal_s(out).matrix(), s.marginal_s(rho).matrix()));
  }
  const DensityMatrix biased = step_III_nonselective(
      s, tensor(tensor(DensityMatrix(Operator::diagonal({0.8, 0.2}).matrix()), DensityMatrix::maximally_mixed(s.config().cells)),
                s.ready_m()));
  int rejected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    scheme_config c;
    c.entangler = random_unitary(g, 4);
    try {
      step_IV_entangle(scheme{c}, biased);
    } catch (const scheme_constraint_error&) {
      ++rejected;
    }
  }
  return {worst <= 1e-12 && rejected == 100,
          fmt::format("S marginal dev {:.2e}; {}/100 violating entanglers rejected", worst, rejected)};
}

scheme_config random_config(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(3, 6);
  scheme_config c;
  c.beta = 0.3 + 2.7 * u(g);
  c.cells = dim(g);
  c.pointer_dim = dim(g);
  c.barrier.tunneling_initial = 0.2 + 1.5 * u(g);
  c.barrier.tunneling_final = 0.05 + 0.3 * u(g);
  c.barrier.bias_initial = u(g) - 0.5;
  c.barrier.bias_final = u(g) - 0.5;
  c.barrier.t_final = 0.5 + 5.0 * u(g);
  c.barrier.steps = 20 + static_cast<int>(100 * u(g));
  if (u(g) < 0.5) c.meter_values = {1.0, 0.0, -1.0};
  const Index dpsi = static_cast<Index>(c.meter_values.size());
  std::vector<std::vector<double>> phases(2, std::vector<double>(static_cast<std::size_t>(dpsi)));
  for (auto& row : phases)
    for (auto& p : row) p = 6.283185307179586 * u(g);
  c.entangler = controlled_shift(2, dpsi, phases);
  c.seed = g();
  return c;
}

outcome round_trips() {
  const auto base = verify_appendix_b(scheme{scheme_config{}}, 7);
  double worst = std::max({base.deviation_a, base.deviation_b, base.deviation_c, base.deviation_d});
  int passed = 0;
  std::mt19937_64 g(901);
  for (int trial = 0; trial < 20; ++trial) {
    const scheme s{random_config(g)};
    const auto r = verify_appendix_b(s, g());
    passed += r.passed();
    worst = std::max({worst, r.deviation_a, r.deviation_b, r.deviation_c, r.deviation_d});
  }
  return {base.passed() && passed == 20 && worst <= 1e-12,
          fmt::format("default {}; random {}/20; max deviation {:.2e}", base.passed() ? "ok" : "failed", passed, worst)};
}

std::string serialize(std::size_t workers) {
  std::ostringstream out;
  const auto sch = drive_schedule::linear(Operator::hermitian(Matrix(0.5 * pauli_z())),
                                          Operator::hermitian(Matrix(pauli_z() + 0.7 * pauli_x())), 2.0, 400);
  const auto samples = tpm_sample(sch, 1.0, 50000, 42, workers);
  io::write_work_csv(out, samples);
  out << io::to_json(jarzynski_equality_check(samples, 1.0, delta_F(sch.initial_hamiltonian(), sch.final_hamiltonian(), 1.0))).dump(2);
  scheme_config c;
  c.n_samples = 20000;
  const auto res = run_scheme(scheme{c}, workers);
  io::write_scheme_csv(out, res.runs);
  io::write_json_lines(out, res.runs);
  out << io::to_json(res.original).dump(2) << io::to_json(res.modified).dump(2);
  return out.str();
}

outcome reproducibility() {
  const auto a = serialize(1);
  const auto b = serialize(8);
  return {a == b, fmt::format("{} bytes, {}", a.size(), a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  int failures = 0;
  auto run = [&](int id, const char* name, double budget_s, const std::function<outcome()>& f) {
    const auto t0 = clock::now();
    outcome o{false, ""};
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (budget_s > 0 && secs > budget_s) {
      o.ok = false;
      o.detail += fmt::format(" (over the {} s budget)", budget_s);
    }
    failures += !o.ok;
    fmt::print("[{}] {:2d}: {} - {} [{:.2f} s]\n", o.ok ? "PASS" : "FAIL", id, name, o.detail, secs);
    std::fflush(stdout);
  };

  run(1, "relaxation values", 1.0, relaxation_values);
  run(2, "original Jarzynski equality", 30.0, original_equality);
  scheme_result res;
  run(3, "modified equality and inequality", 60.0, [&] {
    res = run_scheme(scheme{scheme_config{}});
    return modified_equality(res);
  });
  run(4, "entropy ledger conservation", 0.0, [&] { return ledger_conservation(res); });
  run(5, "relative entropy and truncation identities", 0.0, relative_entropy_identities);
  run(6, "measurement channel properties", 0.0, measurement_channel);
  run(7, "pointer model and trigger", 0.0, pointer_model_checks);
  run(8, "step IV constraint", 0.0, step_iv_constraint);
  run(9, "unitary round trips", 0.0, round_trips);
  run(10, "reproducibility across worker counts", 0.0, reproducibility);
  fmt::print("{} of 10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
