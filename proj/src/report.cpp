#include "bmc/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bmc::report {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_body(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(table.columns[i]);
  }
  out += "\r\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("csv_body: row width mismatch in table " + table.name);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += "\r\n";
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json verdict_to_json(const Verdict& v) {
  return json{{"name", v.name},       {"estimate", v.estimate},
              {"ci_lo", v.ci_lo},     {"ci_hi", v.ci_hi},
              {"target", v.target},   {"pass", v.pass},
              {"n_samples", v.n_samples}, {"note", v.note}};
}

Verdict verdict_from_json(const json& j) {
  Verdict v;
  v.name = j.at("name").get<std::string>();
  v.estimate = j.at("estimate").get<double>();
  v.ci_lo = j.at("ci_lo").get<double>();
  v.ci_hi = j.at("ci_hi").get<double>();
  v.target = j.at("target").get<double>();
  v.pass = j.at("pass").get<bool>();
  v.n_samples = j.at("n_samples").get<long>();
  v.note = j.value("note", "");
  return v;
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f << body;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string write_report(ExperimentReport& report, const std::string& dir) {
  fs::path base(dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec && !fs::is_directory(base))
    throw std::runtime_error("cannot create output directory: " + base.string());

  report.artifacts.clear();

  CsvTable verdicts_table;
  verdicts_table.name = "verdicts";
  verdicts_table.columns = {"name", "estimate", "ci_lo", "ci_hi",
                            "target", "pass", "n_samples", "note"};
  for (const auto& v : report.verdicts)
    verdicts_table.rows.push_back({v.name, format_double(v.estimate),
                                   format_double(v.ci_lo), format_double(v.ci_hi),
                                   format_double(v.target), v.pass ? "true" : "false",
                                   std::to_string(v.n_samples), v.note});

  std::vector<const CsvTable*> all;
  all.push_back(&verdicts_table);
  for (const auto& t : report.tables) all.push_back(&t);
  for (const CsvTable* t : all) {
    fs::path p = base / (t->name + ".csv");
    write_text(p, csv_body(*t));
    report.artifacts.push_back(p.string());
  }

  json manifest{{"schema_version", report.schema_version},
                {"experiment", report.experiment},
                {"config_hash", report.config_hash},
                {"seed", report.seed},
                {"workers", report.workers},
                {"wall_time_s", report.wall_time_s},
                {"artifacts", report.artifacts},
                {"verdicts", json::array()}};
  for (const auto& v : report.verdicts) manifest["verdicts"].push_back(verdict_to_json(v));
  fs::path mpath = base / "manifest.json";
  write_text(mpath, manifest.dump(2) + "\n");
  return mpath.string();
}

ExperimentReport read_manifest(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open manifest: " + path);
  json j;
  f >> j;
  ExperimentReport r;
  r.schema_version = j.at("schema_version").get<std::string>();
  if (r.schema_version != "report/1")
    throw std::runtime_error("unsupported manifest schema: " + r.schema_version);
  r.experiment = j.at("experiment").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.workers = j.at("workers").get<unsigned>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  for (const auto& a : j.at("artifacts")) r.artifacts.push_back(a.get<std::string>());
  for (const auto& v : j.at("verdicts")) r.verdicts.push_back(verdict_from_json(v));
  return r;
}

}  // namespace bmc::report
