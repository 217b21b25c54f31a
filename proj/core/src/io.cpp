#include "gaitsym/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "gaitsym/error.hpp"

namespace gaitsym {
namespace {

constexpr std::array<std::string_view, 7> kColumns{"time", "fx", "fy", "fz", "tx", "ty", "tz"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string located(std::string_view source, std::size_t line, const std::string& msg) {
  return std::string(source) + ":" + std::to_string(line) + ": " + msg;
}

double parse_real(std::string_view field, std::string_view source, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec == std::errc::invalid_argument || ptr != last) {
    throw Error(ErrorCode::MalformedRow, located(source, line, "cannot parse '" + std::string(field) + "'"));
  }
  if (ec == std::errc::result_out_of_range || !std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteValue, located(source, line, "non-finite value '" + std::string(field) + "'"));
  }
  return value;
}

}  // namespace

const TimeSeries& TrialData::channel(std::string_view name) const {
  for (const auto& c : channels) {
    if (c.channel == name) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown channel '" + std::string(name) + "'");
}

TrialData parse_trial_text(std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      const auto end = std::min(text.find('\n', pos), text.size());
      line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw Error(ErrorCode::MalformedHeader, std::string(source) + ": empty file");
  const auto header = split(trim(line));
  if (header.size() != kColumns.size() || !std::equal(header.begin(), header.end(), kColumns.begin())) {
    throw Error(ErrorCode::MalformedHeader,
                located(source, line_no, "expected header '" + std::string(kTrialHeader) + "'"));
  }

  TrialData data;
  std::array<std::vector<double>, 6> columns;
  while (next_line(line)) {
    const auto fields = split(line);
    if (fields.size() != kColumns.size()) {
      throw Error(ErrorCode::MalformedRow, located(source, line_no,
                                                   "expected 7 fields, found " + std::to_string(fields.size())));
    }
    const double t = parse_real(fields[0], source, line_no);
    if (!data.time.empty() && t <= data.time.back()) {
      throw Error(ErrorCode::NonUniformSampling, located(source, line_no, "time is not strictly increasing"));
    }
    data.time.push_back(t);
    for (std::size_t c = 0; c < columns.size(); ++c) columns[c].push_back(parse_real(fields[c + 1], source, line_no));
  }
  if (data.time.size() < 2) throw Error(ErrorCode::MalformedRow, std::string(source) + ": need at least two rows");

  std::vector<double> spacing(data.time.size() - 1);
  for (std::size_t i = 0; i + 1 < data.time.size(); ++i) spacing[i] = data.time[i + 1] - data.time[i];
  const double dt = median(spacing);
  for (std::size_t i = 0; i < spacing.size(); ++i) {
    if (std::abs(spacing[i] - dt) > kSamplingTolerance * dt) {
      throw Error(ErrorCode::NonUniformSampling,
                  located(source, i + 3, "spacing " + std::to_string(spacing[i]) + " s deviates from median " +
                                             std::to_string(dt) + " s by more than 1%"));
    }
  }

  for (std::size_t c = 0; c < columns.size(); ++c) {
    TimeSeries s;
    s.t0 = data.time.front();
    s.dt = dt;
    s.channel = std::string(kColumns[c + 1]);
    s.samples = std::move(columns[c]);
    data.channels.push_back(std::move(s));
  }
  return data;
}

TrialData parse_trial(const std::filesystem::path& path) {
  return parse_trial_text(read_text_file(path), path.string());
}

std::string format_trial_csv(const TrialData& data) {
  std::string out(kTrialHeader);
  out += '\n';
  char buf[32];
  for (std::size_t i = 0; i < data.time.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", data.time[i]);
    out += buf;
    for (const auto& c : data.channels) {
      std::snprintf(buf, sizeof buf, ",%.17g", c.samples[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string format_trial_csv(const TimeSeries& series) {
  TrialData data;
  data.time.resize(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) data.time[i] = series.t0 + static_cast<double>(i) * series.dt;
  for (std::size_t c = 1; c < kColumns.size(); ++c) {
    TimeSeries s;
    s.channel = std::string(kColumns[c]);
    s.samples = kColumns[c] == "tz" ? series.samples : std::vector<double>(series.size(), 0.0);
    data.channels.push_back(std::move(s));
  }
  return format_trial_csv(data);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "failed reading '" + path.string() + "'");
  return std::move(ss).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot move output into '" + path.string() + "'");
  }
}

std::vector<std::filesystem::path> list_files(const std::filesystem::path& dir, std::string_view extension) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::IoError, "'" + dir.string() + "' is not a directory");
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) out.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list '" + dir.string() + "'");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gaitsym
