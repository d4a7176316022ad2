#include "nac/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "nac/errors.hpp"

namespace nac {

namespace {

std::string fmt6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_metrics_row(const MetricsRow& row) {
  std::string s = std::to_string(row.step);
  s += ',' + row.phase + ',' + row.algo + ',' + std::to_string(row.seed);
  s += ',' + fmt6(row.mean_return) + ',' + fmt6(row.std_return) + ',' + fmt6(row.val_bellman_error);
  return s;
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) : path_(path), out_(path) {
  if (!out_) throw std::runtime_error("cannot open metrics file '" + path.string() + "'");
  out_ << kMetricsHeader << '\n' << std::flush;
}

void MetricsWriter::append(const MetricsRow& row) {
  out_ << format_metrics_row(row) << '\n' << std::flush;
  if (!out_) throw std::runtime_error("write failed for metrics file '" + path_.string() + "'");
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
  MetricsWriter w(path);
  for (const auto& r : rows) w.append(r);
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw FormatError("metrics CSV header mismatch");
  }
  std::vector<MetricsRow> rows;
  for (std::size_t n = 2; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 7) throw ParseError(n, "expected 7 fields");
    MetricsRow r;
    try {
      r.step = std::stoll(f[0]);
      r.phase = f[1];
      r.algo = f[2];
      r.seed = std::stoull(f[3]);
      r.mean_return = std::stod(f[4]);
      r.std_return = std::stod(f[5]);
      r.val_bellman_error = std::stod(f[6]);
    } catch (const std::logic_error&) {
      throw ParseError(n, "unparsable number");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metrics file '" + path.string() + "'");
  return read_metrics_csv(in);
}

}  // namespace nac
