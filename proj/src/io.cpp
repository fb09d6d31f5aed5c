#include "mdm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdm/error.hpp"
#include "mdm/rng.hpp"

namespace mdm::io {
namespace {

Error FieldError(const std::string& what) { return IoError("bad record: " + what); }

template <typename Fn>
auto Guarded(const Json& j, Fn fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw FieldError(std::string(e.what()) + " in " + j.dump());
  }
}

}  // namespace

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << contents;
  if (!out) throw IoError("failed writing " + path);
}

std::vector<Json> ParseJsonLines(const std::string& text, const std::string& source_name) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = Json::parse(line);
      if (!j.is_object()) throw IoError(source_name + ":" + std::to_string(line_no) + ": not an object");
      out.push_back(std::move(j));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Json> ReadJsonLines(const std::string& path) {
  return ParseJsonLines(ReadFile(path), path);
}

Json ToJson(const SdmEntry& e) {
  Json j;
  j["word"] = e.word;
  if (e.pos) j["pos"] = *e.pos;
  j["context"] = e.context;
  j["definition"] = e.definition;
  j["sense_index"] = e.sense_index;
  if (e.context_unchecked) j["context_unchecked"] = true;
  return j;
}

Json ToJson(const MdmEntry& e) {
  Json j;
  j["word"] = e.word;
  j["contexts"] = e.contexts;
  j["definitions"] = e.definitions;
  j["aligned"] = e.aligned;
  return j;
}

Json ToJson(const ModelExample& e) {
  Json j;
  j["word"] = e.word;
  j["source"] = e.source;
  j["target"] = e.target;
  if (e.aux_word) j["aux_word"] = *e.aux_word;
  if (e.aux_synonyms) j["aux_synonyms"] = *e.aux_synonyms;
  if (e.aux_hypernyms) j["aux_hypernyms"] = *e.aux_hypernyms;
  return j;
}

Json ToJson(const splits::GroupedPrediction& e) {
  Json j;
  j["word"] = e.word;
  j["prediction"] = e.prediction;
  j["reference"] = e.reference;
  return j;
}

Json ToJson(const metrics::MetricReport& r) {
  Json j;
  j["metric"] = r.name;
  j["corpus_score"] = r.corpus_score;
  j["config"] = Json::object();
  for (const auto& [k, v] : r.config) j["config"][k] = v;
  if (!r.stats.empty()) {
    j["stats"] = Json::object();
    for (const auto& [k, v] : r.stats) j["stats"][k] = v;
  }
  Json entries = Json::array();
  for (const auto& e : r.per_entry) {
    Json item;
    item["id"] = e.id;
    item["score"] = e.score ? Json(*e.score) : Json(nullptr);
    if (e.precision) item["precision"] = *e.precision;
    if (e.recall) item["recall"] = *e.recall;
    if (!e.note.empty()) item["note"] = e.note;
    entries.push_back(std::move(item));
  }
  j["per_entry"] = std::move(entries);
  return j;
}

Json ToJson(const metrics::DatasetStats& s) {
  Json j;
  j["metric"] = "dataset_stats";
  j["entries"] = s.entries;
  j["mean_context_tokens"] = s.mean_context_tokens;
  j["mean_contexts"] = s.mean_contexts;
  j["mean_definitions"] = s.mean_definitions;
  j["mean_definition_tokens"] = s.mean_definition_tokens;
  return j;
}

SdmEntry SdmFromJson(const Json& j) {
  return Guarded(j, [&] {
    SdmEntry e;
    e.word = j.at("word").get<std::string>();
    if (j.contains("pos") && !j["pos"].is_null()) e.pos = j["pos"].get<std::string>();
    e.context = j.at("context").get<std::string>();
    e.definition = j.at("definition").get<std::string>();
    e.sense_index = j.value("sense_index", std::size_t{0});
    e.context_unchecked = j.value("context_unchecked", false);
    return e;
  });
}

MdmEntry MdmFromJson(const Json& j) {
  return Guarded(j, [&] {
    MdmEntry e;
    e.word = j.at("word").get<std::string>();
    e.contexts = j.at("contexts").get<std::vector<std::string>>();
    e.definitions = j.at("definitions").get<std::vector<std::string>>();
    e.aligned = j.value("aligned", false);
    return e;
  });
}

ModelExample ModelExampleFromJson(const Json& j) {
  return Guarded(j, [&] {
    ModelExample e;
    e.word = j.at("word").get<std::string>();
    e.source = j.at("source").get<std::string>();
    e.target = j.at("target").get<std::string>();
    if (j.contains("aux_word")) e.aux_word = j["aux_word"].get<std::string>();
    if (j.contains("aux_synonyms")) e.aux_synonyms = j["aux_synonyms"].get<std::string>();
    if (j.contains("aux_hypernyms")) e.aux_hypernyms = j["aux_hypernyms"].get<std::string>();
    return e;
  });
}

splits::Prediction PredictionFromJson(const Json& j) {
  return Guarded(j, [&] {
    splits::Prediction p;
    p.word = j.at("word").get<std::string>();
    p.context_index = j.value("context_index", std::size_t{0});
    p.prediction = j.at("prediction").get<std::string>();
    return p;
  });
}

std::vector<SdmEntry> ReadSdm(const std::string& path) {
  std::vector<SdmEntry> out;
  for (const auto& j : ReadJsonLines(path)) out.push_back(SdmFromJson(j));
  return out;
}

std::vector<MdmEntry> ReadMdm(const std::string& path) {
  std::vector<MdmEntry> out;
  for (const auto& j : ReadJsonLines(path)) {
    out.push_back(MdmFromJson(j));
    try {
      Validate(out.back());
    } catch (const Error& e) {
      throw IoError(path + ": " + e.what());
    }
  }
  return out;
}

std::vector<splits::Prediction> ReadPredictions(const std::string& path) {
  std::vector<splits::Prediction> out;
  for (const auto& j : ReadJsonLines(path)) out.push_back(PredictionFromJson(j));
  return out;
}

std::string FileDigest(const std::string& path) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ReadFile(path))));
  return buf;
}

std::string SummaryTable(const std::vector<metrics::MetricReport>& reports) {
  std::string out = "metric            score\n";
  out += "----------------  --------\n";
  char line[96];
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-16s  %8.2f\n", r.name.c_str(), r.corpus_score);
    out += line;
    for (const auto& [k, v] : r.stats) {
      if (k != "intra" && k != "inter") continue;
      std::snprintf(line, sizeof line, "%-16s  %8.2f\n", (r.name + "_" + k).c_str(), v);
      out += line;
    }
  }
  return out;
}

}  // namespace mdm::io
