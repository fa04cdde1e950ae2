#include "rsfutures/csv.hpp"

#include <cstdio>

#include <json.hpp>

#include "rsfutures/errors.hpp"

namespace rsf {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvFile::CsvFile(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
  if (!out_) throw Error("csv: cannot open '" + path + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvFile::sep() {
  if (row_open_) out_ << ',';
  row_open_ = true;
}

CsvFile& CsvFile::field(double v) {
  sep();
  out_ << format_full(v);
  return *this;
}

CsvFile& CsvFile::field(long long v) {
  sep();
  out_ << v;
  return *this;
}

CsvFile& CsvFile::field(const std::string& v) {
  sep();
  out_ << v;
  return *this;
}

void CsvFile::endrow() {
  out_ << '\n';
  row_open_ = false;
}

void write_manifest(const std::string& dir, const ManifestInfo& info) {
  nlohmann::json j;
  j["command"] = info.command;
  j["config_hash"] = info.config_hash;
  j["seed"] = info.seed;
  j["version"] = kVersion;
  j["wall_ms"] = info.wall_ms;
  j["files"] = info.files;
  std::ofstream out(dir + "/manifest.json", std::ios::binary);
  if (!out) throw Error("manifest: cannot open '" + dir + "/manifest.json'");
  out << j.dump(2) << '\n';
}

}  // namespace rsf
