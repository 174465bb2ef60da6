#include "bmc/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bmc::config {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Scalar TOML value -> JSON: strings, booleans, integers, floats, flat arrays.
json toml_value(const std::string& raw, const std::string& key) {
  std::string v = trim(raw);
  if (v.empty()) throw std::runtime_error("config field '" + key + "': empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw std::runtime_error("config field '" + key + "': unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      char c = v[i];
      if (c == '\\' && i + 2 < v.size()) {
        char n = v[++i];
        switch (n) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default:
            throw std::runtime_error("config field '" + key + "': bad escape");
        }
      } else {
        out += c;
      }
    }
    return json(out);
  }
  if (v.front() == '[') {
    if (v.back() != ']')
      throw std::runtime_error("config field '" + key + "': unterminated array");
    json arr = json::array();
    std::string inner = v.substr(1, v.size() - 2);
    std::string item;
    int depth = 0;
    bool in_str = false;
    for (char c : inner) {
      if (c == '"') in_str = !in_str;
      if (!in_str && c == '[') ++depth;
      if (!in_str && c == ']') --depth;
      if (!in_str && depth == 0 && c == ',') {
        if (!trim(item).empty()) arr.push_back(toml_value(item, key));
        item.clear();
      } else {
        item += c;
      }
    }
    if (!trim(item).empty()) arr.push_back(toml_value(item, key));
    return arr;
  }
  if (v == "true") return json(true);
  if (v == "false") return json(false);
  // numeric
  bool is_float = v.find_first_of(".eE") != std::string::npos &&
                  v.find("0x") == std::string::npos;
  try {
    std::size_t used = 0;
    if (is_float) {
      double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing");
      return json(d);
    }
    long long n = std::stoll(v, &used, 0);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return json(n);
  } catch (const std::exception&) {
    throw std::runtime_error("config field '" + key + "': cannot parse value '" + v + "'");
  }
}

json parse_toml_subset(const std::string& text) {
  json root = json::object();
  json* target = &root;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    // strip comments outside strings
    std::string body;
    bool in_str = false;
    for (char c : line) {
      if (c == '"') in_str = !in_str;
      if (c == '#' && !in_str) break;
      body += c;
    }
    body = trim(body);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw std::runtime_error("config: malformed table header '" + body + "'");
      std::string name = trim(body.substr(1, body.size() - 2));
      if (name.empty()) throw std::runtime_error("config: empty table name");
      target = &root[name];
      if (target->is_null()) *target = json::object();
      continue;
    }
    std::size_t eq = std::string::npos;
    in_str = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') in_str = !in_str;
      if (body[i] == '=' && !in_str) { eq = i; break; }
    }
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value, got '" + body + "'");
    std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw std::runtime_error("config: empty key in '" + body + "'");
    (*target)[key] = toml_value(body.substr(eq + 1), key);
  }
  return root;
}

ExperimentConfig from_json_doc(const json& doc) {
  if (!doc.is_object()) throw std::runtime_error("config: document must be a table/object");
  static const std::vector<std::string> known = {"experiment", "seed", "workers",
                                                 "out", "params"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || it.key() == k;
    if (!ok) throw std::runtime_error("config: unknown field '" + it.key() + "'");
  }
  ExperimentConfig c;
  if (!doc.contains("experiment") || !doc["experiment"].is_string())
    throw std::runtime_error("config field 'experiment': required string");
  c.experiment = doc["experiment"].get<std::string>();
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned())
      throw std::runtime_error("config field 'seed': must be an integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("workers")) {
    if (!doc["workers"].is_number_integer() && !doc["workers"].is_number_unsigned())
      throw std::runtime_error("config field 'workers': must be an integer");
    long w = doc["workers"].get<long>();
    if (w < 1) throw std::runtime_error("config field 'workers': must be >= 1");
    c.workers = static_cast<unsigned>(w);
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string())
      throw std::runtime_error("config field 'out': must be a string");
    c.out_dir = doc["out"].get<std::string>();
  }
  if (doc.contains("params")) {
    if (!doc["params"].is_object())
      throw std::runtime_error("config field 'params': must be a table/object");
    c.params = doc["params"];
  }
  // canonical form: sorted-key JSON (nlohmann objects iterate sorted)
  c.canonical_text = doc.dump();
  return c;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && (t.front() == '{')) {
    json doc;
    try {
      doc = json::parse(t);
    } catch (const json::exception& e) {
      throw std::runtime_error(std::string("config: JSON parse error: ") + e.what());
    }
    return from_json_doc(doc);
  }
  return from_json_doc(parse_toml_subset(text));
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void check_known_params(const json& params, const std::vector<std::string>& known) {
  for (auto it = params.begin(); it != params.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || it.key() == k;
    if (!ok)
      throw std::runtime_error("config field 'params." + it.key() + "': unknown field");
  }
}

double param_double(const json& params, const std::string& key, double dflt) {
  if (!params.contains(key)) return dflt;
  if (!params[key].is_number())
    throw std::runtime_error("config field 'params." + key + "': must be a number");
  return params[key].get<double>();
}

long param_long(const json& params, const std::string& key, long dflt) {
  if (!params.contains(key)) return dflt;
  if (!params[key].is_number_integer() && !params[key].is_number_unsigned())
    throw std::runtime_error("config field 'params." + key + "': must be an integer");
  return params[key].get<long>();
}

std::string param_string(const json& params, const std::string& key,
                         const std::string& dflt) {
  if (!params.contains(key)) return dflt;
  if (!params[key].is_string())
    throw std::runtime_error("config field 'params." + key + "': must be a string");
  return params[key].get<std::string>();
}

std::vector<double> param_double_list(const json& params, const std::string& key,
                                      const std::vector<double>& dflt) {
  if (!params.contains(key)) return dflt;
  if (!params[key].is_array())
    throw std::runtime_error("config field 'params." + key + "': must be an array");
  std::vector<double> out;
  for (const auto& v : params[key]) {
    if (!v.is_number())
      throw std::runtime_error("config field 'params." + key + "': numeric array expected");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<long> param_long_list(const json& params, const std::string& key,
                                  const std::vector<long>& dflt) {
  if (!params.contains(key)) return dflt;
  if (!params[key].is_array())
    throw std::runtime_error("config field 'params." + key + "': must be an array");
  std::vector<long> out;
  for (const auto& v : params[key]) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
      throw std::runtime_error("config field 'params." + key + "': integer array expected");
    out.push_back(v.get<long>());
  }
  return out;
}

}  // namespace bmc::config
