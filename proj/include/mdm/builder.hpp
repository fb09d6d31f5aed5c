#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdm/corpus.hpp"
#include "mdm/inventory.hpp"

namespace mdm {

// One aligned (context, definition) pair.
struct SdmEntry {
  std::string word;
  std::optional<std::string> pos;
  std::string context;
  std::string definition;
  std::size_t sense_index = 0;
  bool context_unchecked = false;  // imported data; context need not contain the word

  bool operator==(const SdmEntry&) const = default;
};

// All contexts and all definitions of one word. Unless aligned, contexts and
// definitions are unrelated lists and their lengths may differ.
struct MdmEntry {
  std::string word;
  std::vector<std::string> contexts;
  std::vector<std::string> definitions;
  bool aligned = false;

  bool operator==(const MdmEntry&) const = default;
};

struct ModelExample {
  std::string word;
  std::string source;
  std::string target;
  std::optional<std::string> aux_word;
  std::optional<std::string> aux_synonyms;
  std::optional<std::string> aux_hypernyms;

  bool operator==(const ModelExample&) const = default;
};

/// Throws mdm::Error (kConfig) unless N >= 1, M >= 1 and aligned implies N == M.
void Validate(const MdmEntry& entry);

namespace builder {

inline constexpr std::string_view kSep = "<sep>";
inline constexpr std::string_view kJoiner = " <sep> ";
inline constexpr std::size_t kDefaultTokenBudget = 480;
inline constexpr std::size_t kMinTokenBudget = 16;

/// "<sep>" -> "<sep/>", "<sep/>" -> "<sep//>", ...; inverse of Unescape.
std::string EscapeReserved(std::string_view text);
std::string UnescapeReserved(std::string_view text);

/// Escapes each part and joins with " <sep> ".
std::string JoinSegments(const std::vector<std::string>& parts);
/// Splits on " <sep> " and unescapes each part.
std::vector<std::string> SplitSegments(std::string_view joined);

struct WordWikiOptions {
  std::size_t k = 0;
  std::size_t token_budget = kDefaultTokenBudget;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

struct WordWikiResult {
  std::vector<MdmEntry> entries;
  std::size_t inventory_words = 0;
  std::size_t skipped_absent = 0;     // inventory words with no indexed sentence
  std::size_t truncated_entries = 0;  // entries that lost contexts or tokens to the budget
  std::size_t contexts = 0;
};

/// Pairs every word found in both the index and the inventory with M = sense
/// count definitions and up to N = M + k sampled corpus sentences (all of them
/// when fewer are available). Contexts are lowercase token text in ascending
/// sentence-id order, trimmed to token_budget tokens in total. Output is
/// sorted by word and does not depend on options.jobs.
WordWikiResult BuildWordWiki(const corpus::CorpusIndex& index,
                             const inventory::SenseInventory& inv,
                             const WordWikiOptions& options);

/// Groups SDM pairs by word (first-appearance order) into aligned entries.
std::vector<MdmEntry> BuildMdmEasy(const std::vector<SdmEntry>& sdm);

/// source = "word: w context: c1 <sep> c2 ...", target = "d1 <sep> d2 ...".
/// With an inventory, auxiliary targets are filled when the word has
/// synonyms or hypernyms.
ModelExample FormatExample(const MdmEntry& entry,
                           const inventory::SenseInventory* inv = nullptr);

/// Recovers (word, contexts, definitions) from a formatted example.
MdmEntry ParseExample(const ModelExample& example);

}  // namespace builder
}  // namespace mdm
