#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "mdm/builder.hpp"
#include "mdm/metrics.hpp"
#include "mdm/splits.hpp"

namespace mdm::io {

using Json = nlohmann::ordered_json;

std::string ReadFile(const std::string& path);
// Creates parent directories as needed.
void WriteFile(const std::string& path, const std::string& contents);

// Parses one JSON object per non-blank line; errors carry path:line.
std::vector<Json> ReadJsonLines(const std::string& path);
std::vector<Json> ParseJsonLines(const std::string& text, const std::string& source_name);

// Record <-> JSON. Field names follow the documented JSON-Lines schemas.
Json ToJson(const SdmEntry& e);
Json ToJson(const MdmEntry& e);
Json ToJson(const ModelExample& e);
Json ToJson(const splits::GroupedPrediction& e);
Json ToJson(const metrics::MetricReport& r);
Json ToJson(const metrics::DatasetStats& s);

SdmEntry SdmFromJson(const nlohmann::ordered_json& j);
MdmEntry MdmFromJson(const nlohmann::ordered_json& j);
ModelExample ModelExampleFromJson(const nlohmann::ordered_json& j);
splits::Prediction PredictionFromJson(const nlohmann::ordered_json& j);

std::vector<SdmEntry> ReadSdm(const std::string& path);
std::vector<MdmEntry> ReadMdm(const std::string& path);
std::vector<splits::Prediction> ReadPredictions(const std::string& path);

template <typename T>
std::string ToJsonLines(const std::vector<T>& records) {
  std::string out;
  for (const auto& r : records) out += ToJson(r).dump() + '\n';
  return out;
}

/// Hex FNV-1a 64 of a file's bytes, for manifests.
std::string FileDigest(const std::string& path);

/// Fixed-width plain-text table: metric, score.
std::string SummaryTable(const std::vector<metrics::MetricReport>& reports);

}  // namespace mdm::io
