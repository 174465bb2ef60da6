#pragma once
// Experiment report persistence: RFC-4180 CSV tables with round-trippable
// float formatting, and a JSON manifest that is the single source of truth
// for downstream tooling.

#include <cstdint>
#include <string>
#include <vector>

namespace bmc::report {

struct Verdict {
  std::string name;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double target = 0.0;
  bool pass = false;
  long n_samples = 0;
  std::string note;
};

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct ExperimentReport {
  std::string schema_version = "report/1";
  std::string experiment;
  std::string config_hash;  // 16 hex digits
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double wall_time_s = 0.0;
  std::vector<Verdict> verdicts;
  std::vector<CsvTable> tables;
  std::vector<std::string> artifacts;  // paths written, filled by write_report

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

// 17 significant digits: parses back to the identical double.
std::string format_double(double v);
// RFC-4180 quoting (applied only when the field needs it).
std::string csv_escape(const std::string& field);
// Full file body including the header line; rows terminated with CRLF.
std::string csv_body(const CsvTable& table);

// FNV-1a over the canonicalized config text.
std::uint64_t fnv1a64(const std::string& text);
std::string hash_hex(std::uint64_t h);

// Writes <name>.csv per table, a verdicts.csv table and manifest.json; returns
// the manifest path.  I/O errors carry the offending path.
std::string write_report(ExperimentReport& report, const std::string& dir);

// Parses a manifest produced by write_report (tables are listed as artifact
// paths; their row data is not re-read).
ExperimentReport read_manifest(const std::string& path);

}  // namespace bmc::report
