#include "tritail/record.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace tritail {

const char* const kArtifactVersion = "0.1.0";

std::string iso_timestamp_utc() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["alpha"] = c.alpha;
  j["x_min"] = c.x_min;
  j["n_grid"] = c.n_grid;
  j["a"] = c.a;
  j["theta"] = c.theta;
  j["gamma"] = c.gamma;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["mode"] = c.mode;
  j["out"] = c.out;
  j["trace"] = c.trace;
  j["threads"] = c.threads;
  j["subset"] = c.subset;
  j["s"] = c.s;
  j["b"] = c.b;
  j["slack"] = c.slack;
  j["z"] = c.z;
  j["tolerance_scale"] = c.tolerance_scale;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.alpha = j.at("alpha").get<double>();
  c.x_min = j.at("x_min").get<double>();
  c.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
  c.a = j.at("a").get<double>();
  c.theta = j.at("theta").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.reps = j.at("reps").get<std::int64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.mode = j.at("mode").get<std::string>();
  c.out = j.at("out").get<std::string>();
  c.trace = j.at("trace").get<std::string>();
  c.threads = j.at("threads").get<int>();
  c.subset = j.at("subset").get<std::string>();
  c.s = j.at("s").get<double>();
  c.b = j.at("b").get<double>();
  c.slack = j.at("slack").get<double>();
  c.z = j.at("z").get<std::vector<double>>();
  c.tolerance_scale = j.at("tolerance_scale").get<double>();
  return c;
}

nlohmann::json record_to_json(const ResultRecord& r) {
  nlohmann::json j;
  j["command"] = r.command;
  j["artifact_version"] = r.artifact_version;
  j["timestamp"] = r.timestamp;
  j["config"] = config_to_json(r.config);
  j["outputs"] = r.outputs;
  if (!r.verify_items.empty()) {
    nlohmann::json items = nlohmann::json::array();
    for (const VerifyItem& it : r.verify_items) {
      nlohmann::json e;
      e["id"] = it.id;
      e["name"] = it.name;
      e["passed"] = it.passed;
      e["seconds"] = it.seconds;
      e["detail"] = it.detail;
      items.push_back(e);
    }
    j["verify_items"] = items;
  }
  return j;
}

std::string render_record(const ResultRecord& r) { return record_to_json(r).dump(2) + "\n"; }

std::string csv_escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ",";
    out += csv_escape(fields[i]);
  }
  out += "\n";
  return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out = csv_line(header);
  for (const std::vector<std::string>& row : rows) out += csv_line(row);
  return out;
}

std::string table_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void append_jsonl(const std::string& path, const nlohmann::json& obj) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for appending");
  out << obj.dump() << "\n";
}

}  // namespace tritail
