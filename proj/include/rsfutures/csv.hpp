#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace rsf {

inline constexpr const char* kVersion = "1.0.0";

// 17 significant digits, enough to reproduce the double exactly.
std::string format_full(double v);

// Plain UTF-8 CSV: header row, comma separator, '\n' endings, '.' decimals.
class CsvFile {
 public:
  CsvFile(const std::string& path, const std::vector<std::string>& header);

  CsvFile& field(double v);
  CsvFile& field(long long v);
  CsvFile& field(int v) { return field(static_cast<long long>(v)); }
  CsvFile& field(const std::string& v);
  void endrow();

 private:
  void sep();
  std::ofstream out_;
  bool row_open_ = false;
};

struct ManifestInfo {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  std::vector<std::string> files;
};

void write_manifest(const std::string& dir, const ManifestInfo& info);

}  // namespace rsf
