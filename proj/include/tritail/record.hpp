#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "tritail/config.hpp"

namespace tritail {

// outcome of one acceptance item inside a verify record
struct VerifyItem {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

// one self-contained run: re-running the embedded config reproduces every
// value field bit for bit; only the timestamp changes between runs
struct ResultRecord {
  std::string command;
  std::string artifact_version;
  std::string timestamp;
  ExperimentConfig config;
  nlohmann::json outputs = nlohmann::json::object();
  std::vector<VerifyItem> verify_items;
};

extern const char* const kArtifactVersion;

std::string iso_timestamp_utc();

nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

// keys come out sorted, so two records differing only in timestamp differ in
// exactly that one line
nlohmann::json record_to_json(const ResultRecord& r);
std::string render_record(const ResultRecord& r);

// RFC 4180: fields holding commas, quotes, or newlines are quoted and inner
// quotes doubled
std::string csv_escape(const std::string& field);
std::string csv_line(const std::vector<std::string>& fields);
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

// stable numeric formatting for tables; records keep full precision in JSON
std::string table_double(double x);

void write_text_file(const std::string& path, const std::string& content);

// one JSON object per line
void append_jsonl(const std::string& path, const nlohmann::json& obj);

}  // namespace tritail
