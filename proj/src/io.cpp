#include "netsub/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace netsub {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_run_csv(std::ostream& os, const RunRecord& rec) {
  os << kRunCsvHeader << '\n';
  for (const auto& r : rec.rows) {
    os << r.t << ',' << format_number(r.gap) << ',' << format_number(r.scaled_gap) << ','
       << format_number(r.disagreement) << ',' << format_number(r.s_norm1) << ',' << format_number(r.avg_gap)
       << '\n';
  }
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& rec) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open " + path.string() + " for writing");
  write_run_csv(os, rec);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

void CsvWriter::sep() {
  if (written_ == columns_) throw InvalidArgument("CSV row has more fields than the header");
  if (written_ > 0) os_ << ',';
  ++written_;
}

CsvWriter& CsvWriter::operator<<(double v) {
  sep();
  os_ << format_number(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  sep();
  os_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (written_ != columns_) throw InvalidArgument("CSV row has fewer fields than the header");
  os_ << '\n';
  written_ = 0;
}

void write_metadata(const std::filesystem::path& csv_path, nlohmann::json meta) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream stamp;
  stamp << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  meta["timestamp"] = stamp.str();
  meta["csv"] = csv_path.filename().string();
  auto json_path = csv_path;
  json_path.replace_extension(".json");
  std::ofstream os(json_path);
  if (!os) throw InvalidArgument("cannot open " + json_path.string() + " for writing");
  os << meta.dump(2) << '\n';
}

void write_quartic_data_csv(std::ostream& os, const QuarticData& data, int n_agents) {
  std::vector<std::string> header{"k", "agent"};
  for (Eigen::Index j = 0; j < data.A.cols(); ++j) header.push_back("a_" + std::to_string(j + 1));
  header.push_back("b");
  CsvWriter csv(os, header);
  const long K = data.A.rows(), base = K / n_agents, rem = K % n_agents;
  long agent = 0, left = base + (agent < rem ? 1 : 0);
  for (long k = 0; k < K; ++k) {
    while (left == 0) {
      ++agent;
      left = base + (agent < rem ? 1 : 0);
    }
    csv << k << agent;
    for (Eigen::Index j = 0; j < data.A.cols(); ++j) csv << data.A(k, j);
    csv << data.b(k);
    csv.end_row();
    --left;
  }
}

}  // namespace netsub
