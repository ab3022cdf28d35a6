#pragma once

// CSV output of a run. Numbers are printed with fixed precision so identical
// runs give byte-identical files.
//
//   trajectory.csv  per-epoch estimate and error for every pass
//   outages.csv     one row per scored outage
//   drift.csv       drift curves through each outage and the first seconds
//                   after GNSS returns
//   summary.csv     horizontal and vertical RMSE per grade and mode

#include "fgins/pipeline.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace fgins {

/// Throws std::runtime_error when the file cannot be written.
void write_trajectory_csv(const std::filesystem::path& path, const RunResult& run);
void write_outages_csv(const std::filesystem::path& path, const OutageReport& report);
/// recovery: seconds after each outage kept in the curve.
void write_drift_csv(const std::filesystem::path& path, const RunResult& run, double outage_len,
                     double recovery = 10.0);

struct SummaryRow {
    std::string grade;
    std::map<Mode, OutageReport> modes;
};

/// One row per grade; columns for M0, M1 and M2 (empty when a mode was not run).
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);

/// All four files of one run under dir, created if needed.
void write_run_report(const std::filesystem::path& dir, const RunResult& run, const std::string& grade,
                      double outage_len);

}  // namespace fgins
