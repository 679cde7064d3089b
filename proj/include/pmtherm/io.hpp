#pragma once

// Serialization of trajectories, work samples, reports and scheme records.
//
// CSV numbers use 17 significant digits. JSON numbers use the shortest text
// that parses back to the same double; non-finite values become null.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "json.hpp"

#include "pmtherm/jarzynski.hpp"
#include "pmtherm/relaxation.hpp"
#include "pmtherm/scheme.hpp"

namespace pmtherm::io {

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string number(double x);

/// Columns: t,rho,sigma
void write_relaxation_csv(std::ostream& out, const relaxation_trajectory& trajectory);

/// Columns: initial_energy,final_energy,work,stream_id,draw_id
void write_work_csv(std::ostream& out, std::span<const work_sample> samples);

/// Columns: stream_id,draw_id,initial_sector,initial_energy,event_outcome,
/// final_sector,final_energy,w_drive,w_er_experimenter,w_er_m,w_total,
/// sigma_total,accounting_active
void write_scheme_csv(std::ostream& out, std::span<const scheme_run_record> records);

nlohmann::json to_json(const jarzynski_report& report);
nlohmann::json to_json(const entropy_ledger& ledger);
nlohmann::json to_json(const scheme_run_record& record);
nlohmann::json to_json(const appendix_b_report& report);

/// One compact JSON object per line.
void write_json_lines(std::ostream& out, std::span<const scheme_run_record> records);

/// Writes `content` to `path`, creating parent directories. Throws io_error.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pmtherm::io
