#include "mdm/inventory.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mdm/error.hpp"

namespace mdm::inventory {
namespace {

std::string Lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> SplitOn(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    parts.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string> SplitList(const std::string& field) {
  std::vector<std::string> out;
  for (auto& item : SplitOn(field, '|')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

std::string JoinList(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += '|';
    out += items[i];
  }
  return out;
}

std::optional<std::string> NonEmpty(std::string s) {
  s = Trim(s);
  if (s.empty()) return std::nullopt;
  return s;
}

Error RowError(const std::string& source, std::size_t line, const std::string& why) {
  return IoError(source + ":" + std::to_string(line) + ": " + why);
}

bool IsHeader(const std::vector<std::string>& cols) {
  return cols.size() >= 3 && Lower(Trim(cols[0])) == "word" && Lower(Trim(cols[1])) == "pos" &&
         Lower(Trim(cols[2])) == "definition";
}

std::vector<std::string> JsonList(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return {};
  const auto& v = j[key];
  if (v.is_string()) return SplitList(v.get<std::string>());
  std::vector<std::string> out;
  for (const auto& item : v) {
    auto s = Trim(item.get<std::string>());
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::optional<std::string> JsonOptional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return NonEmpty(j[key].get<std::string>());
}

void AddChecked(SenseInventory& inv, const std::string& word, Sense sense, const DropList* drop,
                const std::string& source, std::size_t line) {
  const std::string key = Lower(Trim(word));
  sense.definition = Trim(sense.definition);
  if (key.empty()) throw RowError(source, line, "empty word");
  if (sense.definition.empty()) throw RowError(source, line, "empty definition");
  if (drop && drop->Drops(key, sense.definition)) return;
  inv.Add(key, std::move(sense));
}

}  // namespace

Format FormatFromPath(const std::string& path) {
  const auto ext = Lower(std::filesystem::path(path).extension().string());
  return (ext == ".jsonl" || ext == ".json") ? Format::kJsonl : Format::kTsv;
}

bool DropList::Drops(const std::string& word, const std::string& definition) const {
  if (std::find(words.begin(), words.end(), word) != words.end()) return true;
  const auto it = senses.find(word);
  return it != senses.end() &&
         std::find(it->second.begin(), it->second.end(), definition) != it->second.end();
}

DropList LoadDropList(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open drop list: " + path);
  DropList drop;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty() || Trim(line)[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      drop.words.push_back(Lower(Trim(line)));
    } else {
      drop.senses[Lower(Trim(line.substr(0, tab)))].push_back(Trim(line.substr(tab + 1)));
    }
  }
  return drop;
}

bool SenseInventory::Add(const std::string& word, Sense sense) {
  auto& senses = entries_[Lower(word)];
  for (const auto& existing : senses) {
    if (existing.definition == sense.definition) return false;
  }
  senses.push_back(std::move(sense));
  return true;
}

const std::vector<Sense>& SenseInventory::Lookup(const std::string& word) const {
  static const std::vector<Sense> kEmpty;
  const auto it = entries_.find(Lower(word));
  return it == entries_.end() ? kEmpty : it->second;
}

SenseInventory ParseInventory(const std::string& text, Format format,
                              const std::string& source_name, const DropList* drop) {
  SenseInventory inv(source_name);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool seen_any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    seen_any = true;
    Sense sense;
    std::string word;
    if (format == Format::kTsv) {
      const auto cols = SplitOn(line, '\t');
      if (line_no == 1 && IsHeader(cols)) continue;
      if (cols.size() < 3) {
        throw RowError(source_name, line_no, "expected at least 3 tab-separated columns");
      }
      if (cols.size() > 6) throw RowError(source_name, line_no, "more than 6 columns");
      word = cols[0];
      sense.pos = NonEmpty(cols[1]);
      sense.definition = cols[2];
      if (cols.size() > 3) sense.usage_example = NonEmpty(cols[3]);
      if (cols.size() > 4) sense.synonyms = SplitList(cols[4]);
      if (cols.size() > 5) sense.hypernyms = SplitList(cols[5]);
    } else {
      try {
        const auto j = nlohmann::json::parse(line);
        if (!j.is_object()) throw RowError(source_name, line_no, "expected a JSON object");
        word = j.at("word").get<std::string>();
        sense.definition = j.at("definition").get<std::string>();
        sense.pos = JsonOptional(j, "pos");
        sense.usage_example = JsonOptional(j, "usage_example");
        sense.synonyms = JsonList(j, "synonyms");
        sense.hypernyms = JsonList(j, "hypernyms");
      } catch (const nlohmann::json::exception& e) {
        throw RowError(source_name, line_no, e.what());
      }
    }
    AddChecked(inv, word, std::move(sense), drop, source_name, line_no);
  }
  if (!seen_any || inv.empty()) throw IoError(source_name + ": empty inventory");
  return inv;
}

SenseInventory LoadInventory(const std::string& path, Format format, const DropList* drop) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open inventory: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseInventory(buffer.str(), format, path, drop);
}

std::string SerializeInventory(const SenseInventory& inv, Format format) {
  std::string out;
  for (const auto& [word, senses] : inv.entries()) {
    for (const auto& s : senses) {
      if (format == Format::kTsv) {
        out += word + '\t' + s.pos.value_or("") + '\t' + s.definition + '\t' +
               s.usage_example.value_or("") + '\t' + JoinList(s.synonyms) + '\t' +
               JoinList(s.hypernyms) + '\n';
      } else {
        nlohmann::ordered_json j;
        j["word"] = word;
        if (s.pos) j["pos"] = *s.pos;
        j["definition"] = s.definition;
        if (s.usage_example) j["usage_example"] = *s.usage_example;
        j["synonyms"] = s.synonyms;
        j["hypernyms"] = s.hypernyms;
        out += j.dump() + '\n';
      }
    }
  }
  return out;
}

}  // namespace mdm::inventory
