#include "regen/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "regen/error.hpp"
#include "regen/levy_model.hpp"

namespace regen {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a #-comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
}

double parse_number(std::string token, std::size_t line_no) {
  token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
  if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = token.data();
  if (!token.empty() && token[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) fail(line_no, "bad number '" + token + "'");
  return v;
}

std::string parse_string(const std::string& token, std::size_t line_no) {
  if (token.size() < 2 || token.back() != '"') fail(line_no, "unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < token.size(); ++i) {
    char c = token[i];
    if (c == '\\') {
      if (i + 2 >= token.size()) fail(line_no, "dangling escape");
      switch (token[++i]) {
        case 'n': c = '\n'; break;
        case 't': c = '\t'; break;
        case '"': c = '"'; break;
        case '\\': c = '\\'; break;
        default: fail(line_no, "unknown escape");
      }
    } else if (c == '"') {
      fail(line_no, "stray quote in string");
    }
    out.push_back(c);
  }
  return out;
}

ConfigValue parse_value(const std::string& token, std::size_t line_no) {
  ConfigValue v;
  if (token.empty()) fail(line_no, "missing value");
  if (token.front() == '"') {
    v.kind = ConfigValue::Kind::String;
    v.text = parse_string(token, line_no);
  } else if (token == "true" || token == "false") {
    v.kind = ConfigValue::Kind::Bool;
    v.boolean = token == "true";
  } else if (token.front() == '[') {
    if (token.back() != ']') fail(line_no, "unterminated array");
    v.kind = ConfigValue::Kind::NumberArray;
    std::stringstream items(token.substr(1, token.size() - 2));
    std::string item;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;  // trailing comma
      v.numbers.push_back(parse_number(item, line_no));
    }
  } else {
    v.kind = ConfigValue::Kind::Number;
    v.text = token;
    v.number = parse_number(token, line_no);
  }
  return v;
}

const ConfigValue* find(const ConfigTable& t, const std::string& section, const std::string& key) {
  const auto s = t.find(section);
  if (s == t.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const ConfigValue& expect(const ConfigValue& v, ConfigValue::Kind kind, const std::string& key) {
  if (v.kind != kind) throw ConfigError("config key '" + key + "' has the wrong type");
  return v;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

ConfigTable parse_config_text(const std::string& text) {
  ConfigTable table;
  table[""];
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') fail(line_no, "bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail(line_no, "empty section name");
      table[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    const std::size_t start = line_no;
    while (!value.empty() && value.front() == '[' && value.find(']') == std::string::npos) {
      if (!std::getline(in, raw)) fail(start, "unterminated array");
      ++line_no;
      value += " " + trim(strip_comment(raw));
    }
    if (table[section].count(key) != 0) fail(start, "duplicate key '" + key + "'");
    table[section][key] = parse_value(value, start);
  }
  return table;
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Simulate: return "simulate";
    case Suite::Lln: return "lln";
    case Suite::Variance: return "variance";
    case Suite::Clt: return "clt";
    case Suite::Martingale: return "martingale";
    case Suite::Classify: return "classify";
    case Suite::Bounds: return "bounds";
    case Suite::Limits: return "limits";
  }
  return "?";
}

Suite suite_from_string(const std::string& s) {
  for (Suite x : {Suite::Simulate, Suite::Lln, Suite::Variance, Suite::Clt, Suite::Martingale, Suite::Classify,
                  Suite::Bounds, Suite::Limits}) {
    if (to_string(x) == s) return x;
  }
  if (s == "regime") return Suite::Classify;
  throw ConfigError("unknown suite '" + s + "'");
}

Regime regime_from_string(const std::string& s) {
  const std::string l = lower(s);
  for (Regime r : {Regime::Moderate, Regime::Fast, Regime::Slow, Regime::Indeterminate}) {
    if (lower(to_string(r)) == l) return r;
  }
  throw ConfigError("unknown regime '" + s + "'");
}

ExperimentConfig config_from_table(const ConfigTable& t) {
  using K = ConfigValue::Kind;
  ExperimentConfig c;
  if (const auto* v = find(t, "", "suite")) c.suite = suite_from_string(expect(*v, K::String, "suite").text);
  if (const auto* v = find(t, "", "n_list")) c.n_list = expect(*v, K::NumberArray, "n_list").numbers;
  if (const auto* v = find(t, "", "replicates")) {
    const double r = expect(*v, K::Number, "replicates").number;
    if (!(r >= 1.0) || r != std::floor(r)) throw ConfigError("replicates must be a positive integer");
    c.replicates = static_cast<std::size_t>(r);
  }
  if (const auto* v = find(t, "", "seed")) {
    std::string tok = expect(*v, K::Number, "seed").text;
    tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), c.seed);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ConfigError("seed must be an unsigned 64-bit integer");
  }
  if (const auto* v = find(t, "", "eps_budget")) c.eps_budget = expect(*v, K::Number, "eps_budget").number;
  if (const auto* v = find(t, "", "workers")) {
    const double w = expect(*v, K::Number, "workers").number;
    if (!(w >= 1.0) || w != std::floor(w)) throw ConfigError("workers must be a positive integer");
    c.workers = static_cast<unsigned>(w);
  }
  if (const auto* v = find(t, "", "write_replicates")) c.write_replicates = expect(*v, K::Bool, "write_replicates").boolean;

  if (const auto s = t.find("model"); s != t.end()) {
    for (const auto& [key, v] : s->second) {
      if (key == "name") {
        c.model = expect(v, K::String, "model.name").text;
      } else {
        c.model_params[key] = expect(v, K::Number, "model." + key).number;
      }
    }
  }
  if (const auto* v = find(t, "classify", "expect_regime")) {
    c.expect_regime = regime_from_string(expect(*v, K::String, "classify.expect_regime").text);
  }
  if (const auto* v = find(t, "classify", "gamma_hat_range")) {
    const auto& r = expect(*v, K::NumberArray, "classify.gamma_hat_range").numbers;
    if (r.size() != 2 || !(r[0] <= r[1])) throw ConfigError("gamma_hat_range needs [lo, hi]");
    c.gamma_hat_range = {r[0], r[1]};
  }
  if (const auto* v = find(t, "classify", "probe")) c.probe = expect(*v, K::NumberArray, "classify.probe").numbers;
  if (const auto* v = find(t, "bounds", "m")) c.bounds_m = expect(*v, K::NumberArray, "bounds.m").numbers;
  if (const auto* v = find(t, "bounds", "k")) c.bound_k = expect(*v, K::Number, "bounds.k").number;
  if (const auto* v = find(t, "limits", "gamma")) c.limit_gamma = expect(*v, K::Number, "limits.gamma").number;
  if (const auto* v = find(t, "limits", "sigma")) c.limit_sigma = expect(*v, K::Number, "limits.sigma").number;
  if (const auto* v = find(t, "limits", "y1_step")) c.y1_step = expect(*v, K::Number, "limits.y1_step").number;
  if (const auto* v = find(t, "limits", "y2_step")) c.y2_step = expect(*v, K::Number, "limits.y2_step").number;
  if (const auto* v = find(t, "limits", "y2_u_max")) c.y2_u_max = expect(*v, K::Number, "limits.y2_u_max").number;
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_table(parse_config_text(buf.str()));
}

void validate(const ExperimentConfig& c) {
  if (c.replicates < 1) throw ConfigError("replicates must be at least 1");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (!(c.eps_budget > 0.0)) throw ConfigError("eps_budget must be positive");
  const bool needs_n = c.suite == Suite::Simulate || c.suite == Suite::Lln || c.suite == Suite::Variance ||
                       c.suite == Suite::Clt || c.suite == Suite::Martingale;
  if (needs_n && c.n_list.empty()) throw ConfigError("n_list must be nonempty");
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    if (!(c.n_list[i] > 1.0) || !std::isfinite(c.n_list[i])) throw ConfigError("n_list values must exceed 1");
    if (i > 0 && !(c.n_list[i] > c.n_list[i - 1])) throw ConfigError("n_list must be increasing");
  }
  for (double m : c.bounds_m) {
    if (!(m > 1.0)) throw ConfigError("bounds.m values must exceed 1");
  }
  try {
    (void)make_model(c.model, c.model_params);
  } catch (const Error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

}  // namespace regen
