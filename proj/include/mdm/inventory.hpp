#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mdm::inventory {

struct Sense {
  std::string definition;
  std::optional<std::string> usage_example;
  std::optional<std::string> pos;
  std::vector<std::string> synonyms;
  std::vector<std::string> hypernyms;

  bool operator==(const Sense&) const = default;
};

enum class Format { kTsv, kJsonl };

// Picks kJsonl for *.jsonl / *.json paths and kTsv otherwise.
Format FormatFromPath(const std::string& path);

// Words (and optionally single senses) to exclude while loading.
struct DropList {
  std::map<std::string, std::vector<std::string>> senses;  // word -> definitions
  std::vector<std::string> words;

  bool Drops(const std::string& word, const std::string& definition) const;
};

// Lines are "word" or "word<TAB>definition"; blank lines and '#' comments are skipped.
DropList LoadDropList(const std::string& path);

class SenseInventory {
 public:
  SenseInventory() = default;
  explicit SenseInventory(std::string source_name) : source_name_(std::move(source_name)) {}

  /// Appends a sense in file order. The word is lowercased; a repeated
  /// (word, definition) pair is ignored. Returns false when ignored.
  bool Add(const std::string& word, Sense sense);

  /// Case-insensitive exact match; empty when absent.
  const std::vector<Sense>& Lookup(const std::string& word) const;

  const std::map<std::string, std::vector<Sense>>& entries() const { return entries_; }
  const std::string& source_name() const { return source_name_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Equality ignores source_name.
  bool operator==(const SenseInventory& other) const { return entries_ == other.entries_; }

 private:
  std::map<std::string, std::vector<Sense>> entries_;
  std::string source_name_;
};

/// Throws mdm::Error (kIo) with the 1-based line number for malformed rows and
/// "empty inventory" when no sense was read.
SenseInventory LoadInventory(const std::string& path, Format format,
                             const DropList* drop = nullptr);

/// Parses in-memory text; `source_name` is used in messages.
SenseInventory ParseInventory(const std::string& text, Format format,
                              const std::string& source_name, const DropList* drop = nullptr);

std::string SerializeInventory(const SenseInventory& inv, Format format);

}  // namespace mdm::inventory
