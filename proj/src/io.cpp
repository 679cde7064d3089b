#include "pmtherm/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "pmtherm/errors.hpp"

namespace pmtherm::io {

namespace {

nlohmann::json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

void write_relaxation_csv(std::ostream& out, const relaxation_trajectory& trajectory) {
  const auto sigma = entropy_of_weight(trajectory);
  out << "t,rho,sigma\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k)
    out << number(trajectory.times[k]) << ',' << number(trajectory.weights[k]) << ','
        << number(sigma[k]) << '\n';
}

void write_work_csv(std::ostream& out, std::span<const work_sample> samples) {
  out << "initial_energy,final_energy,work,stream_id,draw_id\n";
  for (const auto& s : samples)
    out << number(s.initial_energy) << ',' << number(s.final_energy) << ',' << number(s.work)
        << ',' << s.stream_id << ',' << s.draw_id << '\n';
}

void write_scheme_csv(std::ostream& out, std::span<const scheme_run_record> records) {
  out << "stream_id,draw_id,initial_sector,initial_energy,event_outcome,final_sector,"
         "final_energy,w_drive,w_er_experimenter,w_er_m,w_total,sigma_total,accounting_active\n";
  for (const auto& r : records)
    out << r.stream_id << ',' << r.draw_id << ',' << r.initial_sector << ','
        << number(r.initial_energy) << ',' << r.event_outcome << ',' << r.final_sector << ','
        << number(r.final_energy) << ',' << number(r.w_drive) << ','
        << number(r.w_er_experimenter) << ',' << number(r.w_er_m) << ',' << number(r.w_total)
        << ',' << number(r.sigma_total) << ',' << (r.accounting_active ? 1 : 0) << '\n';
}

nlohmann::json to_json(const jarzynski_report& r) {
  return {{"estimator_mean", finite_or_null(r.estimator_mean)},
          {"standard_error", finite_or_null(r.standard_error)},
          {"exact_value", finite_or_null(r.exact_value)},
          {"delta_F", finite_or_null(r.delta_F)},
          {"sample_count", r.sample_count},
          {"beta", r.beta},
          {"sigma_total", finite_or_null(r.sigma_total)},
          {"mean_work", finite_or_null(r.mean_work)},
          {"work_standard_error", finite_or_null(r.work_standard_error)},
          {"jensen_lhs", finite_or_null(r.jensen_lhs)},
          {"jensen_rhs", finite_or_null(r.jensen_rhs)},
          {"passed", r.passed},
          {"inequality_holds", r.inequality_holds}};
}

nlohmann::json to_json(const entropy_ledger& ledger) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : ledger.entries())
    entries.push_back({{"system", e.system}, {"sigma", e.sigma}, {"cause", to_string(e.cause)}});
  nlohmann::json totals = nlohmann::json::object();
  for (const auto& [system, sigma] : ledger.totals()) totals[system] = sigma;
  return {{"entries", std::move(entries)}, {"totals", std::move(totals)}};
}

nlohmann::json to_json(const scheme_run_record& r) {
  return {{"stream_id", r.stream_id},
          {"draw_id", r.draw_id},
          {"tpm_initial", {{"sector", r.initial_sector}, {"energy", r.initial_energy}}},
          {"event_outcome", r.event_outcome},
          {"tpm_final", {{"sector", r.final_sector}, {"energy", r.final_energy}}},
          {"accounting_active", r.accounting_active},
          {"sigma_total", r.sigma_total},
          {"work",
           {{"w_drive", r.w_drive},
            {"w_er_experimenter", r.w_er_experimenter},
            {"w_er_m", r.w_er_m},
            {"w_total", r.w_total}}},
          {"ledger", to_json(r.ledger)}};
}

nlohmann::json to_json(const appendix_b_report& r) {
  auto stage = [](bool ok, double dev) {
    return nlohmann::json{{"passed", ok}, {"deviation", finite_or_null(dev)}};
  };
  return {{"stage_a", stage(r.stage_a, r.deviation_a)},
          {"stage_b", stage(r.stage_b, r.deviation_b)},
          {"stage_c", stage(r.stage_c, r.deviation_c)},
          {"stage_d", stage(r.stage_d, r.deviation_d)},
          {"event_outcome", r.event_outcome},
          {"passed", r.passed()}};
}

void write_json_lines(std::ostream& out, std::span<const scheme_run_record> records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw io_error(fmt::format("cannot create directory {}: {}", path.parent_path().string(), ec.message()));
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw io_error(fmt::format("cannot open {} for writing", path.string()));
  f << content;
  f.flush();
  if (!f) throw io_error(fmt::format("write to {} failed", path.string()));
}

}  // namespace pmtherm::io
