#include "mdm/builder.hpp"

#include <algorithm>
#include <map>

#include "mdm/error.hpp"
#include "mdm/parallel.hpp"
#include "mdm/rng.hpp"

namespace mdm {

void Validate(const MdmEntry& entry) {
  if (entry.contexts.empty()) throw ConfigError("entry '" + entry.word + "' has no contexts");
  if (entry.definitions.empty()) throw ConfigError("entry '" + entry.word + "' has no definitions");
  if (entry.aligned && entry.contexts.size() != entry.definitions.size()) {
    throw ConfigError("aligned entry '" + entry.word + "' has N != M");
  }
}

namespace builder {
namespace {

constexpr std::string_view kReservedHead = "<sep";

// Rewrites every "<sep" + j slashes + ">" through `slashes(j)`; a negative
// result leaves the occurrence untouched.
template <typename Fn>
std::string RewriteReserved(std::string_view text, Fn slashes) {
  std::string out;
  out.reserve(text.size() + 4);
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, kReservedHead.size(), kReservedHead) == 0) {
      std::size_t j = i + kReservedHead.size();
      while (j < text.size() && text[j] == '/') ++j;
      if (j < text.size() && text[j] == '>') {
        const auto count = static_cast<long>(j - i - kReservedHead.size());
        const long rewritten = slashes(count);
        if (rewritten >= 0) {
          out += kReservedHead;
          out.append(static_cast<std::size_t>(rewritten), '/');
          out += '>';
          i = j + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

std::string JoinTokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += tokens[i];
  }
  return out;
}

// Budget-sized window around the first occurrence of `word`.
std::string TruncateAround(const std::vector<std::string>& tokens, const std::string& word,
                           std::size_t budget) {
  if (tokens.size() <= budget) return JoinTokens(tokens, 0, tokens.size());
  const auto hit = std::find(tokens.begin(), tokens.end(), word);
  const std::size_t pos = hit == tokens.end() ? 0 : static_cast<std::size_t>(hit - tokens.begin());
  std::size_t begin = pos > budget / 2 ? pos - budget / 2 : 0;
  begin = std::min(begin, tokens.size() - budget);
  return JoinTokens(tokens, begin, begin + budget);
}

std::string JoinUnique(const std::vector<inventory::Sense>& senses,
                       std::vector<std::string> inventory::Sense::*field) {
  std::vector<std::string> seen;
  for (const auto& s : senses) {
    for (const auto& item : s.*field) {
      if (std::find(seen.begin(), seen.end(), item) == seen.end()) seen.push_back(item);
    }
  }
  std::string out;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (i) out += '|';
    out += seen[i];
  }
  return out;
}

}  // namespace

std::string EscapeReserved(std::string_view text) {
  return RewriteReserved(text, [](long j) { return j + 1; });
}

std::string UnescapeReserved(std::string_view text) {
  return RewriteReserved(text, [](long j) { return j >= 1 ? j - 1 : -1; });
}

std::string JoinSegments(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += kJoiner;
    out += EscapeReserved(parts[i]);
  }
  return out;
}

std::vector<std::string> SplitSegments(std::string_view joined) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = joined.find(kJoiner, start);
    if (pos == std::string_view::npos) {
      parts.push_back(UnescapeReserved(joined.substr(start)));
      break;
    }
    parts.push_back(UnescapeReserved(joined.substr(start, pos - start)));
    start = pos + kJoiner.size();
  }
  return parts;
}

WordWikiResult BuildWordWiki(const corpus::CorpusIndex& index,
                             const inventory::SenseInventory& inv,
                             const WordWikiOptions& options) {
  if (options.token_budget < kMinTokenBudget) {
    throw ConfigError("token_budget must be >= " + std::to_string(kMinTokenBudget));
  }
  std::vector<const std::pair<const std::string, std::vector<inventory::Sense>>*> words;
  words.reserve(inv.entries().size());
  for (const auto& item : inv.entries()) words.push_back(&item);

  struct Slot {
    std::optional<MdmEntry> entry;
    bool truncated = false;
  };
  std::vector<Slot> slots(words.size());
  ParallelFor(words.size(), options.jobs, [&](std::size_t w) {
    const auto& [word, senses] = *words[w];
    const auto& candidates = index.Postings(word);
    if (candidates.empty() || senses.empty()) return;

    auto rng = WordRng(options.seed, word);
    auto picks = SampleWithoutReplacement(rng, candidates.size(), senses.size() + options.k);
    std::sort(picks.begin(), picks.end());

    // Drop trailing contexts while over budget; a sole survivor is cut down.
    std::vector<const std::vector<std::string>*> chosen;
    std::size_t total = 0;
    for (auto p : picks) {
      chosen.push_back(&index.sentences()[candidates[p]].tokens);
      total += chosen.back()->size();
    }
    Slot& slot = slots[w];
    while (total > options.token_budget && chosen.size() > 1) {
      total -= chosen.back()->size();
      chosen.pop_back();
      slot.truncated = true;
    }
    MdmEntry entry;
    entry.word = word;
    for (const auto* tokens : chosen) {
      if (tokens->size() > options.token_budget) slot.truncated = true;
      entry.contexts.push_back(TruncateAround(*tokens, word, options.token_budget));
    }
    for (const auto& s : senses) entry.definitions.push_back(s.definition);
    slot.entry = std::move(entry);
  });

  WordWikiResult result;
  result.inventory_words = words.size();
  for (auto& slot : slots) {
    if (!slot.entry) {
      ++result.skipped_absent;
      continue;
    }
    result.truncated_entries += slot.truncated ? 1 : 0;
    result.contexts += slot.entry->contexts.size();
    result.entries.push_back(std::move(*slot.entry));
  }
  return result;
}

std::vector<MdmEntry> BuildMdmEasy(const std::vector<SdmEntry>& sdm) {
  std::vector<MdmEntry> out;
  std::map<std::string, std::size_t> slot_of;
  for (const auto& e : sdm) {
    auto [it, inserted] = slot_of.emplace(e.word, out.size());
    if (inserted) {
      out.emplace_back();
      out.back().word = e.word;
      out.back().aligned = true;
    }
    auto& entry = out[it->second];
    entry.contexts.push_back(e.context);
    entry.definitions.push_back(e.definition);
  }
  return out;
}

ModelExample FormatExample(const MdmEntry& entry, const inventory::SenseInventory* inv) {
  Validate(entry);
  ModelExample ex;
  ex.word = entry.word;
  ex.source = "word: " + entry.word + " context: " + JoinSegments(entry.contexts);
  ex.target = JoinSegments(entry.definitions);
  if (inv) {
    const auto& senses = inv->Lookup(entry.word);
    auto synonyms = JoinUnique(senses, &inventory::Sense::synonyms);
    auto hypernyms = JoinUnique(senses, &inventory::Sense::hypernyms);
    if (!synonyms.empty() || !hypernyms.empty()) {
      ex.aux_word = entry.word;
      if (!synonyms.empty()) ex.aux_synonyms = std::move(synonyms);
      if (!hypernyms.empty()) ex.aux_hypernyms = std::move(hypernyms);
    }
  }
  return ex;
}

MdmEntry ParseExample(const ModelExample& example) {
  constexpr std::string_view kWordPrefix = "word: ";
  constexpr std::string_view kContextMarker = " context: ";
  const std::string_view source = example.source;
  if (source.substr(0, kWordPrefix.size()) != kWordPrefix) {
    throw IoError("model example source lacks the 'word: ' prefix");
  }
  const auto marker = source.find(kContextMarker, kWordPrefix.size());
  if (marker == std::string_view::npos) throw IoError("model example source lacks ' context: '");
  MdmEntry entry;
  entry.word = std::string(source.substr(kWordPrefix.size(), marker - kWordPrefix.size()));
  entry.contexts = SplitSegments(source.substr(marker + kContextMarker.size()));
  entry.definitions = SplitSegments(example.target);
  return entry;
}

}  // namespace builder
}  // namespace mdm
