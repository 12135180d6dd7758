#include "tritail/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tritail {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) b += 1;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) e -= 1;
  return s.substr(b, e - b);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) parts.push_back(trim(cur));
  if (parts.empty()) parts.push_back(trim(s));
  return parts;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' needs a number, got '" + v + "'");
  }
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int x{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw std::invalid_argument("config: key '" + key + "' needs an integer, got '" + v + "'");
  return x;
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

const std::vector<std::string>& known_modes() {
  static const std::vector<std::string> modes{"crude",    "conditional", "tail",
                                             "payoff",   "planted",     "many-hub",
                                             "hub-lln",  "bounds",      "integral"};
  return modes;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  std::stringstream ss(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(ss, raw)) {
    lineno += 1;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value, got '" + trim(raw) + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "alpha") {
      c.alpha = parse_double(key, val);
    } else if (key == "x_min") {
      c.x_min = parse_double(key, val);
    } else if (key == "n" || key == "n_grid") {
      c.n_grid.clear();
      for (const std::string& p : split_commas(val))
        c.n_grid.push_back(parse_int<std::int64_t>(key, p));
    } else if (key == "a") {
      c.a = parse_double(key, val);
    } else if (key == "theta") {
      c.theta = parse_double(key, val);
    } else if (key == "gamma") {
      c.gamma = parse_double(key, val);
    } else if (key == "reps") {
      c.reps = parse_int<std::int64_t>(key, val);
    } else if (key == "seed") {
      c.seed = parse_int<std::uint64_t>(key, val);
    } else if (key == "mode") {
      c.mode = unquote(val);
    } else if (key == "out") {
      c.out = unquote(val);
    } else if (key == "trace") {
      c.trace = unquote(val);
    } else if (key == "threads") {
      c.threads = parse_int<int>(key, val);
    } else if (key == "subset") {
      c.subset = unquote(val);
    } else if (key == "s") {
      c.s = parse_double(key, val);
    } else if (key == "b") {
      c.b = parse_double(key, val);
    } else if (key == "slack") {
      c.slack = parse_double(key, val);
    } else if (key == "z") {
      c.z.clear();
      for (const std::string& p : split_commas(val)) c.z.push_back(parse_double(key, p));
    } else if (key == "tolerance_scale") {
      c.tolerance_scale = parse_double(key, val);
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" +
                                  key + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::string out;
  out += "alpha = " + fmt_double(c.alpha) + "\n";
  out += "x_min = " + fmt_double(c.x_min) + "\n";
  out += "n_grid = ";
  for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(c.n_grid[i]);
  }
  out += "\n";
  out += "a = " + fmt_double(c.a) + "\n";
  out += "theta = " + fmt_double(c.theta) + "\n";
  out += "gamma = " + fmt_double(c.gamma) + "\n";
  out += "reps = " + std::to_string(c.reps) + "\n";
  out += "seed = " + std::to_string(c.seed) + "\n";
  out += "mode = \"" + c.mode + "\"\n";
  out += "out = \"" + c.out + "\"\n";
  out += "trace = \"" + c.trace + "\"\n";
  out += "threads = " + std::to_string(c.threads) + "\n";
  out += "subset = \"" + c.subset + "\"\n";
  out += "s = " + fmt_double(c.s) + "\n";
  out += "b = " + fmt_double(c.b) + "\n";
  out += "slack = " + fmt_double(c.slack) + "\n";
  out += "z = ";
  for (std::size_t i = 0; i < c.z.size(); ++i) {
    if (i) out += ", ";
    out += fmt_double(c.z[i]);
  }
  out += "\n";
  out += "tolerance_scale = " + fmt_double(c.tolerance_scale) + "\n";
  return out;
}

void validate_config(const ExperimentConfig& c) {
  if (!(c.alpha > 1.0 && c.alpha < 2.0))
    throw std::invalid_argument("config: alpha = " + fmt_double(c.alpha) +
                                " outside the valid window (1, 2)");
  if (!(c.x_min > 0.0)) throw std::invalid_argument("config: x_min must be positive");
  if (c.n_grid.empty()) throw std::invalid_argument("config: n grid must not be empty");
  for (std::int64_t n : c.n_grid) {
    if (n < 3)
      throw std::invalid_argument("config: n = " + std::to_string(n) + " below the minimum of 3");
  }
  if (c.reps < 0) throw std::invalid_argument("config: reps must be nonnegative");
  if (!(c.a >= 0.0)) throw std::invalid_argument("config: a must be nonnegative");
  if (std::find(known_modes().begin(), known_modes().end(), c.mode) == known_modes().end()) {
    std::string all;
    for (const std::string& m : known_modes()) {
      if (!all.empty()) all += ", ";
      all += m;
    }
    throw std::invalid_argument("config: unknown mode '" + c.mode + "' (expected one of " + all +
                                ")");
  }
  if (c.threads < 0) throw std::invalid_argument("config: threads must be nonnegative");
  if (!(c.s >= 0.0)) throw std::invalid_argument("config: s must be nonnegative");
  if (!(c.b >= 0.0)) throw std::invalid_argument("config: b must be nonnegative");
  for (double zi : c.z) {
    if (!(zi > 0.0)) throw std::invalid_argument("config: hub sizes z must be positive");
  }
  if (!(c.tolerance_scale >= 0.0))
    throw std::invalid_argument("config: tolerance_scale must be nonnegative");
}

}  // namespace tritail
