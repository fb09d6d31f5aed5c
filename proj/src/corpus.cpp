#include "mdm/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mdm/error.hpp"
#include "mdm/parallel.hpp"

namespace mdm::corpus {
namespace {

constexpr int kIndexFormatVersion = 1;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Bytes >= 0x80 belong to UTF-8 sequences and are treated as letters.
bool IsWordChar(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

char AsciiLower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool IsAbbreviation(std::string_view chunk, const std::set<std::string>& abbreviations) {
  if (chunk.empty() || chunk.back() != '.') return false;
  chunk.remove_suffix(1);
  while (!chunk.empty() && !IsWordChar(chunk.front())) chunk.remove_prefix(1);
  std::string key;
  key.reserve(chunk.size());
  for (char c : chunk) key.push_back(AsciiLower(c));
  return abbreviations.count(key) > 0;
}

void SplitLine(std::string_view line, const std::set<std::string>& abbreviations,
               std::vector<std::string>& out) {
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    const std::size_t chunk_begin = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    const std::string_view chunk = line.substr(chunk_begin, i - chunk_begin);
    if (chunk.empty() || i >= line.size()) continue;
    if (IsTerminal(chunk.back()) && !IsAbbreviation(chunk, abbreviations)) {
      const auto sentence = Trim(line.substr(start, i - start));
      if (!sentence.empty()) out.emplace_back(sentence);
      start = i;
    }
  }
  const auto tail = Trim(line.substr(std::min(start, line.size())));
  if (!tail.empty()) out.emplace_back(tail);
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (begin == i) break;
    std::string chunk(text.substr(begin, i - begin));
    for (char& c : chunk) c = AsciiLower(c);

    std::size_t core_begin = 0;
    while (core_begin < chunk.size() && !IsWordChar(chunk[core_begin])) ++core_begin;
    if (core_begin == chunk.size()) {
      tokens.push_back(std::move(chunk));
      continue;
    }
    std::size_t core_end = chunk.size();
    while (!IsWordChar(chunk[core_end - 1])) --core_end;

    for (std::size_t p = 0; p < core_begin; ++p) tokens.emplace_back(1, chunk[p]);
    tokens.push_back(chunk.substr(core_begin, core_end - core_begin));
    for (std::size_t p = core_end; p < chunk.size(); ++p) tokens.emplace_back(1, chunk[p]);
  }
  return tokens;
}

const std::set<std::string>& DefaultAbbreviations() {
  static const std::set<std::string> kAbbreviations = {
      "mr",  "mrs", "ms",  "dr",  "prof", "st",  "jr",   "sr",   "rev",  "hon",
      "gen", "col", "capt", "lt", "sgt",  "maj", "gov",  "sen",  "rep",  "mt",
      "ft",  "vs",  "e.g", "i.e", "inc",  "ltd", "corp", "dept", "approx"};
  return kAbbreviations;
}

std::vector<std::string> SplitSentences(std::string_view document,
                                        const std::set<std::string>& abbreviations) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    std::size_t nl = document.find('\n', pos);
    if (nl == std::string_view::npos) nl = document.size();
    SplitLine(document.substr(pos, nl - pos), abbreviations, out);
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string> ReadDocuments(const std::vector<std::string>& paths, DocumentMode mode) {
  std::vector<std::string> documents;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    if (mode == DocumentMode::kFile) {
      documents.push_back(std::move(text));
      continue;
    }
    std::string block;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (Trim(line).empty()) {
        if (!block.empty()) documents.push_back(std::move(block));
        block.clear();
        continue;
      }
      block += line;
      block += '\n';
    }
    if (!block.empty()) documents.push_back(std::move(block));
  }
  return documents;
}

CorpusIndex CorpusIndex::Build(const std::vector<std::string>& documents,
                               const IndexOptions& options) {
  if (options.min_count < 1) throw ConfigError("min_count must be >= 1");

  struct Split {
    std::vector<std::string> raw;
    std::vector<std::vector<std::string>> tokens;
  };
  std::vector<Split> per_document(documents.size());
  ParallelFor(documents.size(), options.jobs, [&](std::size_t d) {
    Split& split = per_document[d];
    for (auto& sentence : SplitSentences(documents[d], options.abbreviations)) {
      auto tokens = Tokenize(sentence);
      if (tokens.empty()) continue;
      split.raw.push_back(std::move(sentence));
      split.tokens.push_back(std::move(tokens));
    }
  });

  CorpusIndex index;
  index.min_count_ = options.min_count;
  std::unordered_map<std::string, std::size_t> counts;
  for (auto& split : per_document) {
    for (std::size_t s = 0; s < split.raw.size(); ++s) {
      Sentence sentence;
      sentence.id = static_cast<std::uint32_t>(index.sentences_.size());
      sentence.raw = std::move(split.raw[s]);
      sentence.tokens = std::move(split.tokens[s]);
      for (const auto& t : sentence.tokens) ++counts[t];
      index.sentences_.push_back(std::move(sentence));
    }
  }
  for (const auto& [word, count] : counts) {
    if (count >= options.min_count) index.frequency_.emplace(word, count);
  }
  for (const auto& sentence : index.sentences_) {
    for (const auto& t : sentence.tokens) {
      if (!index.frequency_.count(t)) continue;
      auto& list = index.postings_[t];
      if (list.empty() || list.back() != sentence.id) list.push_back(sentence.id);
    }
  }
  return index;
}

const std::vector<std::uint32_t>& CorpusIndex::Postings(const std::string& word) const {
  static const std::vector<std::uint32_t> kEmpty;
  const auto it = postings_.find(word);
  return it == postings_.end() ? kEmpty : it->second;
}

std::size_t CorpusIndex::Frequency(const std::string& word) const {
  const auto it = frequency_.find(word);
  return it == frequency_.end() ? 0 : it->second;
}

std::string CorpusIndex::Serialize() const {
  nlohmann::ordered_json j;
  j["format"] = "mdm-corpus-index";
  j["version"] = kIndexFormatVersion;
  j["min_count"] = min_count_;
  auto& sentences = j["sentences"] = nlohmann::ordered_json::array();
  for (const auto& s : sentences_) {
    sentences.push_back({{"id", s.id}, {"raw", s.raw}, {"tokens", s.tokens}});
  }
  auto& postings = j["postings"] = nlohmann::ordered_json::object();
  for (const auto& [word, ids] : postings_) postings[word] = ids;
  auto& frequency = j["frequency"] = nlohmann::ordered_json::object();
  for (const auto& [word, count] : frequency_) frequency[word] = count;
  return j.dump() + "\n";
}

CorpusIndex CorpusIndex::Deserialize(std::string_view text) {
  CorpusIndex index;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "mdm-corpus-index") throw IoError("not a corpus index file");
    if (j.at("version").get<int>() != kIndexFormatVersion) {
      throw IoError("unsupported corpus index version " + j.at("version").dump());
    }
    index.min_count_ = j.at("min_count").get<std::size_t>();
    for (const auto& s : j.at("sentences")) {
      Sentence sentence;
      sentence.id = s.at("id").get<std::uint32_t>();
      sentence.raw = s.at("raw").get<std::string>();
      sentence.tokens = s.at("tokens").get<std::vector<std::string>>();
      if (sentence.id != index.sentences_.size()) throw IoError("corpus index: ids out of order");
      index.sentences_.push_back(std::move(sentence));
    }
    for (const auto& [word, ids] : j.at("postings").items()) {
      index.postings_[word] = ids.get<std::vector<std::uint32_t>>();
    }
    for (const auto& [word, count] : j.at("frequency").items()) {
      index.frequency_[word] = count.get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed corpus index: ") + e.what());
  }
  return index;
}

}  // namespace mdm::corpus
