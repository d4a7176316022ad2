#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace nac {

inline constexpr const char* kMetricsHeader =
    "step,phase,algo,seed,mean_return,std_return,val_bellman_error";

struct MetricsRow {
  std::int64_t step = 0;
  std::string phase;  // demo | env
  std::string algo;
  std::uint64_t seed = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
  double val_bellman_error = 0.0;  // nan when no validation split exists

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// Reals use 6 significant digits (%.6g).
std::string format_metrics_row(const MetricsRow& row);

// Creates (truncating) the file and writes the header immediately; every
// append() writes one line and flushes, so a partial run leaves a valid CSV.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::filesystem::path& path);
  void append(const MetricsRow& row);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path);

// Throws FormatError on a bad header and ParseError (with line number) on a
// malformed row.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);

}  // namespace nac
