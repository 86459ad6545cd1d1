#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "netsub/problem.hpp"
#include "netsub/solver.hpp"

namespace netsub {

/// Shortest decimal that round-trips; the only float formatting used in CSVs.
std::string format_number(double v);

inline constexpr const char* kRunCsvHeader = "t,gap,scaled_gap,disagreement,s_norm1,avg_gap";

void write_run_csv(std::ostream& os, const RunRecord& rec);
void write_run_csv(const std::filesystem::path& path, const RunRecord& rec);

/// Small CSV writer: header up front, rows of numbers or strings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long v);
  CsvWriter& operator<<(int v) { return *this << long(v); }
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  void sep();
  std::ostream& os_;
  std::size_t columns_;
  std::size_t written_ = 0;
};

/// JSON sidecar next to a CSV (same stem, .json). Adds a wall-clock timestamp,
/// which is kept out of the CSV so that CSVs stay byte-identical.
void write_metadata(const std::filesystem::path& csv_path, nlohmann::json meta);

/// Per-row dump of a quartic draw: `k,agent,a_1..a_d,b`.
void write_quartic_data_csv(std::ostream& os, const QuarticData& data, int n_agents);

}  // namespace netsub
