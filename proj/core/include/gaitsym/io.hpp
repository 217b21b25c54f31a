#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gaitsym/signal.hpp"

namespace gaitsym {

inline constexpr std::string_view kTrialHeader = "time,fx,fy,fz,tx,ty,tz";
inline constexpr double kSamplingTolerance = 0.01;

/// Six-axis force/torque record; one TimeSeries per column after `time`.
struct TrialData {
  std::vector<double> time;
  std::vector<TimeSeries> channels;

  const TimeSeries& channel(std::string_view name) const;
};

TrialData parse_trial(const std::filesystem::path& path);
/// `source` prefixes diagnostics.
TrialData parse_trial_text(std::string_view text, std::string_view source = "<input>");

/// Writes `series` into the `tz` column; the other axes are zero.
std::string format_trial_csv(const TimeSeries& series);
std::string format_trial_csv(const TrialData& data);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Regular files with `extension` directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir, std::string_view extension);

}  // namespace gaitsym
