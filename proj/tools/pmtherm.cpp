// Command-line front end: relaxation, jarzynski and scheme subcommands.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmtherm/errors.hpp"
#include "pmtherm/io.hpp"
#include "pmtherm/jarzynski.hpp"
#include "pmtherm/numeric_policy.hpp"
#include "pmtherm/relaxation.hpp"
#include "pmtherm/scheme.hpp"

namespace fs = std::filesystem;
using namespace pmtherm;

namespace {

struct common_options {
  std::string output = "out";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, common_options& o) {
  cmd->add_option("--output", o.output, "Output directory")->capture_default_str();
  cmd->add_option("--format", o.format, "Sample file format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// --- relaxation -------------------------------------------------------------

struct relaxation_options {
  common_options common;
  std::string description;  // empty: all three
  double dt = 1.0;
  double horizon = 3.0;
  int steps = 1000;
  std::string poisson = "exponential";
};

int cmd_relaxation(const relaxation_options& o) {
  std::vector<relaxation_description> which;
  if (o.description.empty())
    which = {relaxation_description::direct, relaxation_description::statistical,
             relaxation_description::poisson_cutoff};
  else
    which = {parse_description(o.description)};
  const auto scheme = o.poisson == "euler" ? poisson_scheme::euler : poisson_scheme::exponential;
  const double expected_stat = std::exp(-1.0);

  bool ok = true;
  nlohmann::json summary = nlohmann::json::array();
  fmt::print("{:<12} {:>24} {:>24} {:>6}\n", "description", "rho(dt)", "sigma(dt)", "check");
  for (auto d : which) {
    const auto traj = d == relaxation_description::poisson_cutoff
                          ? simulate_poisson_cutoff(o.dt, o.horizon, o.steps, scheme)
                          : simulate(d, o.dt, o.horizon, o.steps);
    const double rho = traj.weight_at(o.dt);
    const double sigma = rho > 0.0 ? -std::log(rho) : INFINITY;
    bool pass = false;
    switch (d) {
      case relaxation_description::direct:
        pass = rho == 0.0;
        break;
      case relaxation_description::statistical:
        pass = std::abs(rho - expected_stat) <= 1e-12;
        break;
      case relaxation_description::poisson_cutoff:
        pass = std::abs(rho - expected_stat) <= 1e-6;
        break;
    }
    ok = ok && pass;
    fmt::print("{:<12} {:>24} {:>24} {:>6}\n", to_string(d), io::number(rho), io::number(sigma),
               pass ? "pass" : "FAIL");
    summary.push_back({{"description", to_string(d)},
                       {"rho_dt", rho},
                       {"sigma_dt", std::isfinite(sigma) ? nlohmann::json(sigma) : nlohmann::json()},
                       {"passed", pass}});

    const fs::path base = fs::path(o.common.output) / fmt::format("relaxation_{}", to_string(d));
    if (o.common.format == "csv") {
      std::ostringstream s;
      io::write_relaxation_csv(s, traj);
      io::write_file(base.string() + ".csv", s.str());
    } else {
      const auto sig = entropy_of_weight(traj);
      nlohmann::json j = {{"description", to_string(d)}, {"dt", traj.dt}};
      nlohmann::json t = nlohmann::json::array(), r = nlohmann::json::array(),
                     sg = nlohmann::json::array();
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        t.push_back(traj.times[k]);
        r.push_back(traj.weights[k]);
        sg.push_back(std::isfinite(sig[k]) ? nlohmann::json(sig[k]) : nlohmann::json());
      }
      j["t"] = t;
      j["rho"] = r;
      j["sigma"] = sg;
      io::write_file(base.string() + ".json", dump(j));
    }
  }
  io::write_file(fs::path(o.common.output) / "relaxation_summary.json",
                 dump({{"passed", ok}, {"descriptions", summary}}));
  return ok ? 0 : 1;
}

// --- jarzynski ----------------------------------------------------------------

struct jarzynski_options {
  common_options common;
  std::string scenario = "driven-qubit";
  std::string schedule_file;
  std::uint64_t seed = 42;
  std::size_t samples = 100000;
  int steps = 400;
  double beta = 1.0;
  double t_final = 2.0;
  std::optional<double> delta_f;
};

Matrix read_matrix(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const Index n = static_cast<Index>(re.size());
  Matrix m = Matrix::Zero(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) {
      m(r, c).real(re.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>());
      if (j.contains("im"))
        m(r, c).imag(
            j["im"].at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>());
    }
  return m;
}

drive_schedule make_scenario(const jarzynski_options& o) {
  Matrix sz(2, 2), sx(2, 2);
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  if (o.scenario == "constant")
    return drive_schedule::constant(Operator::diagonal({0.0, 1.0}), o.t_final, o.steps);
  if (o.scenario == "commuting-quench")
    return drive_schedule::linear(Operator::diagonal({0.0, 1.0}), Operator::diagonal({0.0, 2.0}),
                                  o.t_final, o.steps);
  if (o.scenario == "driven-qubit")
    return drive_schedule::linear(Operator::hermitian(0.5 * sz),
                                  Operator::hermitian(Matrix(sz + 0.7 * sx)), o.t_final, o.steps);
  if (o.scenario == "custom") {
    if (o.schedule_file.empty()) throw argument_error("scenario custom needs --schedule FILE");
    std::ifstream f(o.schedule_file);
    if (!f) throw io_error(fmt::format("cannot read schedule file {}", o.schedule_file));
    const auto j = nlohmann::json::parse(f);
    return drive_schedule::linear(Operator::hermitian(read_matrix(j.at("h0"))),
                                  Operator::hermitian(read_matrix(j.at("h1"))),
                                  j.value("t_final", o.t_final), j.value("steps", o.steps));
  }
  throw argument_error(fmt::format("unknown scenario '{}'", o.scenario));
}

int cmd_jarzynski(const jarzynski_options& o) {
  const drive_schedule schedule = make_scenario(o);
  const double df_true = delta_F(schedule.initial_hamiltonian(), schedule.final_hamiltonian(), o.beta);
  const double df = o.delta_f.value_or(df_true);
  const double target = std::exp(-o.beta * df);
  const double exact = jarzynski_exact(schedule, o.beta);
  const double ordered = jarzynski_time_ordered(schedule, o.beta);
  const auto samples = tpm_sample(schedule, o.beta, o.samples, o.seed);
  const auto report = jarzynski_equality_check(samples, o.beta, df);

  const double exact_tol = 1e-6 * std::max(1.0, target);
  const bool exact_ok = std::abs(exact - target) <= exact_tol;
  const bool ordered_ok = std::abs(ordered - target) <= exact_tol;
  const bool ok = report.passed && exact_ok && ordered_ok;

  fmt::print("scenario        {}\n", o.scenario);
  fmt::print("delta_F         {}\n", io::number(df));
  fmt::print("exp(-beta dF)   {}\n", io::number(target));
  fmt::print("exact           {}  {}\n", io::number(exact), exact_ok ? "pass" : "FAIL");
  fmt::print("time_ordered    {}  {}\n", io::number(ordered), ordered_ok ? "pass" : "FAIL");
  fmt::print("estimator       {} +- {}  {}\n", io::number(report.estimator_mean),
             io::number(report.standard_error), report.passed ? "pass" : "FAIL");
  fmt::print("<W>             {}\n", io::number(report.mean_work));

  nlohmann::json j = io::to_json(report);
  j["scenario"] = o.scenario;
  j["seed"] = o.seed;
  j["steps"] = schedule.steps();
  j["exact_enumeration"] = exact;
  j["exact_time_ordered"] = ordered;
  j["exact_passed"] = exact_ok && ordered_ok;
  j["all_passed"] = ok;
  const fs::path out(o.common.output);
  io::write_file(out / "jarzynski_report.json", dump(j));
  if (o.common.format == "csv") {
    std::ostringstream s;
    io::write_work_csv(s, samples);
    io::write_file(out / "work_samples.csv", s.str());
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : samples)
      arr.push_back({{"initial_energy", w.initial_energy},
                     {"final_energy", w.final_energy},
                     {"work", w.work},
                     {"stream_id", w.stream_id},
                     {"draw_id", w.draw_id}});
    io::write_file(out / "work_samples.json", dump(arr));
  }
  return ok ? 0 : 1;
}

// --- scheme -------------------------------------------------------------------

struct scheme_options {
  common_options common;
  scheme_config config;
  bool verify_b = false;
  bool plain_tpm = false;
};

int cmd_scheme(scheme_options o) {
  o.config.enable_measurement = !o.plain_tpm;
  const scheme sch(o.config);
  const auto result = run_scheme(sch);
  const double temperature = sch.temperature();

  // Per-run ledger totals averaged within each accounting class.
  struct class_totals {
    std::size_t runs = 0;
    std::map<std::string, double> sum;
  };
  std::map<std::string, class_totals> classes;
  bool ledger_ok = true;
  for (const auto& r : result.runs) {
    auto& c = classes[r.accounting_active ? "active" : "inactive"];
    ++c.runs;
    for (const auto& [system, sigma] : r.ledger.totals()) c.sum[system] += sigma;
    ledger_ok = ledger_ok && r.ledger.grand_total() == 0.0;
    if (o.config.eigenstate_prep) ledger_ok = ledger_ok && r.ledger.all_zero();
  }

  const double expected_extra =
      classes.count("active") ? 3.0 * temperature * static_cast<double>(classes["active"].runs) /
                                    static_cast<double>(result.runs.size())
                              : 0.0;
  const bool extra_ok = std::abs(result.extra_work - expected_extra) <= 1e-12 * std::max(1.0, std::abs(expected_extra)) + 1e-12;

  std::optional<appendix_b_report> b;
  if (o.verify_b) b = verify_appendix_b(sch, o.config.seed);

  const bool ok = result.original.passed && result.modified.passed &&
                  result.modified.inequality_holds && ledger_ok && extra_ok &&
                  (!b || b->passed());

  fmt::print("runs            {}\n", result.runs.size());
  fmt::print("delta_F         {}\n", io::number(result.delta_F));
  fmt::print("original        {} +- {} vs {}  {}\n", io::number(result.original.estimator_mean),
             io::number(result.original.standard_error), io::number(result.original.exact_value),
             result.original.passed ? "pass" : "FAIL");
  fmt::print("modified        {} +- {} vs {}  {}\n", io::number(result.modified.estimator_mean),
             io::number(result.modified.standard_error), io::number(result.modified.exact_value),
             result.modified.passed ? "pass" : "FAIL");
  fmt::print("inequality      <W_total> = {} >= {}  {}\n", io::number(result.mean_w_total),
             io::number(result.delta_F + result.modified.sigma_total * temperature),
             result.modified.inequality_holds ? "pass" : "FAIL");
  fmt::print("extra work      {} (expected {})  {}\n", io::number(result.extra_work),
             io::number(expected_extra), extra_ok ? "pass" : "FAIL");
  nlohmann::json ledger_json = nlohmann::json::object();
  for (const auto& [name, c] : classes) {
    fmt::print("ledger {:<8} runs {}", name, c.runs);
    nlohmann::json per_run = nlohmann::json::object();
    for (const auto& [system, sum] : c.sum) {
      const double v = sum / static_cast<double>(c.runs);
      fmt::print("  {} {}", system, io::number(v));
      per_run[system] = v;
    }
    fmt::print("\n");
    ledger_json[name] = {{"runs", c.runs}, {"per_run_totals", per_run}};
  }
  fmt::print("ledger pairing  {}\n", ledger_ok ? "pass" : "FAIL");
  if (b) {
    fmt::print("appendix B      a {} ({})  b {} ({})  c {} ({})  d {} ({})\n",
               b->stage_a ? "pass" : "FAIL", io::number(b->deviation_a),
               b->stage_b ? "pass" : "FAIL", io::number(b->deviation_b),
               b->stage_c ? "pass" : "FAIL", io::number(b->deviation_c),
               b->stage_d ? "pass" : "FAIL", io::number(b->deviation_d));
  }

  nlohmann::json j = {{"seed", o.config.seed},
                      {"delta_F", result.delta_F},
                      {"original", io::to_json(result.original)},
                      {"modified", io::to_json(result.modified)},
                      {"mean_w_drive", result.mean_w_drive},
                      {"mean_w_total", result.mean_w_total},
                      {"extra_work", result.extra_work},
                      {"extra_work_expected", expected_extra},
                      {"extra_work_passed", extra_ok},
                      {"ledger", ledger_json},
                      {"ledger_passed", ledger_ok},
                      {"all_passed", ok}};
  if (b) j["appendix_b"] = io::to_json(*b);
  const fs::path out(o.common.output);
  io::write_file(out / "scheme_report.json", dump(j));
  std::ostringstream s;
  if (o.common.format == "csv") {
    io::write_scheme_csv(s, result.runs);
    io::write_file(out / "scheme_runs.csv", s.str());
  } else {
    io::write_json_lines(s, result.runs);
    io::write_file(out / "scheme_runs.jsonl", s.str());
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-reading thermodynamics simulator"};
  app.set_config("--config", "", "INI/TOML config file; sections name subcommands");
  app.require_subcommand(1);

  numeric_policy pol = policy();
  app.add_option("--hermitian-tol", pol.hermitian_tol)->capture_default_str();
  app.add_option("--probability-floor", pol.probability_floor)->capture_default_str();
  app.add_option("--grouping-tol", pol.grouping_tol)->capture_default_str();
  app.add_option("--max-dim", pol.max_dim)->capture_default_str();

  relaxation_options ro;
  auto* rel = app.add_subcommand("relaxation", "Direct, statistical and Poisson relaxation kinetics");
  add_common(rel, ro.common);
  rel->add_option("--description", ro.description, "Only this description")
      ->check(CLI::IsMember({"direct", "statistical", "poisson"}));
  rel->add_option("--dt", ro.dt)->capture_default_str();
  rel->add_option("--horizon", ro.horizon)->capture_default_str();
  rel->add_option("--steps", ro.steps)->capture_default_str();
  rel->add_option("--poisson-scheme", ro.poisson)
      ->check(CLI::IsMember({"exponential", "euler"}))
      ->capture_default_str();

  jarzynski_options jo;
  auto* jar = app.add_subcommand("jarzynski", "Two-point-measurement Jarzynski check");
  add_common(jar, jo.common);
  jar->add_option("--scenario", jo.scenario)
      ->check(CLI::IsMember({"constant", "commuting-quench", "driven-qubit", "custom"}))
      ->capture_default_str();
  jar->add_option("--schedule", jo.schedule_file, "JSON schedule for scenario custom");
  jar->add_option("--seed", jo.seed)->capture_default_str();
  jar->add_option("--samples", jo.samples)->capture_default_str();
  jar->add_option("--steps", jo.steps)->capture_default_str();
  jar->add_option("--beta", jo.beta)->capture_default_str();
  jar->add_option("--t-final", jo.t_final)->capture_default_str();
  jar->add_option("--delta-f", jo.delta_f, "Override the free-energy difference");

  scheme_options so;
  so.config.n_samples = 10000;
  auto* sch = app.add_subcommand("scheme", "Five-step measurement scheme");
  add_common(sch, so.common);
  auto& c = so.config;
  sch->add_option("--seed", c.seed)->capture_default_str();
  sch->add_option("--samples", c.n_samples)->capture_default_str();
  sch->add_option("--steps", c.barrier.steps, "Barrier drive steps")->capture_default_str();
  sch->add_option("--beta", c.beta)->capture_default_str();
  sch->add_option("--cells", c.cells, "A' Planck cells")->capture_default_str();
  sch->add_option("--pointer-dim", c.pointer_dim)->capture_default_str();
  sch->add_option("--tunneling-initial", c.barrier.tunneling_initial)->capture_default_str();
  sch->add_option("--tunneling-final", c.barrier.tunneling_final)->capture_default_str();
  sch->add_option("--bias-initial", c.barrier.bias_initial)->capture_default_str();
  sch->add_option("--bias-final", c.barrier.bias_final)->capture_default_str();
  sch->add_option("--t-final", c.barrier.t_final)->capture_default_str();
  sch->add_flag("--eigenstate-prep", c.eigenstate_prep);
  sch->add_flag("--plain-tpm", so.plain_tpm, "Skip steps III to V");
  sch->add_flag("--verify-appendix-b", so.verify_b);

  CLI11_PARSE(app, argc, argv);
  set_policy(pol);

  try {
    if (rel->parsed()) return cmd_relaxation(ro);
    if (jar->parsed()) return cmd_jarzynski(jo);
    if (sch->parsed()) return cmd_scheme(so);
  } catch (const io_error& e) {
    fmt::print(stderr, "I/O error: {}\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 2;
}
