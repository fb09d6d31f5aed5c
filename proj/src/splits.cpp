#include "mdm/splits.hpp"

#include <algorithm>
#include <set>

#include "mdm/error.hpp"
#include "mdm/rng.hpp"

namespace mdm::splits {

HoldoutSplit BuildDel(const std::vector<SdmEntry>& sdm, std::size_t d, std::uint64_t seed) {
  if (d < 1) throw ConfigError("d must be >= 1");
  HoldoutSplit split;
  split.d = d;
  split.seed = seed;

  std::map<std::string, std::set<std::size_t>> senses_of;
  for (const auto& e : sdm) senses_of[e.word].insert(e.sense_index);

  for (const auto& [word, senses] : senses_of) {
    if (senses.size() <= d) continue;
    const std::vector<std::size_t> ordered(senses.begin(), senses.end());
    auto rng = WordRng(seed, word);
    std::vector<std::size_t> chosen;
    for (auto p : SampleWithoutReplacement(rng, ordered.size(), d)) chosen.push_back(ordered[p]);
    std::sort(chosen.begin(), chosen.end());
    split.held_out.emplace(word, std::move(chosen));
  }

  for (const auto& e : sdm) {
    const auto it = split.held_out.find(e.word);
    const bool test = it != split.held_out.end() &&
                      std::binary_search(it->second.begin(), it->second.end(), e.sense_index);
    (test ? split.test : split.train).push_back(e);
  }
  return split;
}

std::vector<GroupedPrediction> GroupPredictions(const std::vector<Prediction>& preds,
                                                const std::vector<MdmEntry>& reference_order) {
  std::map<std::string, std::size_t> slots;
  for (const auto& ref : reference_order) {
    if (!slots.emplace(ref.word, ref.contexts.size()).second) {
      throw ConfigError("reference lists word '" + ref.word + "' more than once");
    }
  }
  std::map<std::string, std::map<std::size_t, const std::string*>> by_word;
  for (const auto& p : preds) {
    const auto it = slots.find(p.word);
    const std::string slot = p.word + "#" + std::to_string(p.context_index);
    if (it == slots.end()) {
      throw Error(ErrorKind::kAlignment, "prediction for unknown word: " + slot);
    }
    if (p.context_index >= it->second) {
      throw Error(ErrorKind::kAlignment, "prediction for nonexistent context slot: " + slot);
    }
    if (!by_word[p.word].emplace(p.context_index, &p.prediction).second) {
      throw Error(ErrorKind::kAlignment, "duplicate prediction for slot: " + slot);
    }
  }

  std::vector<GroupedPrediction> out;
  out.reserve(reference_order.size());
  for (const auto& ref : reference_order) {
    const auto& got = by_word[ref.word];
    std::vector<std::string> ordered;
    for (std::size_t i = 0; i < ref.contexts.size(); ++i) {
      const auto it = got.find(i);
      if (it == got.end()) {
        throw Error(ErrorKind::kAlignment,
                    "missing prediction for slot: " + ref.word + "#" + std::to_string(i));
      }
      ordered.push_back(*it->second);
    }
    out.push_back({ref.word, builder::JoinSegments(ordered),
                   builder::JoinSegments(ref.definitions)});
  }
  return out;
}

std::vector<SdmEntry> Ungroup(const std::vector<MdmEntry>& mdm) {
  std::vector<SdmEntry> out;
  for (const auto& entry : mdm) {
    if (!entry.aligned || entry.contexts.size() != entry.definitions.size()) {
      throw ConfigError("cannot ungroup unaligned entry '" + entry.word + "'");
    }
    for (std::size_t i = 0; i < entry.contexts.size(); ++i) {
      SdmEntry e;
      e.word = entry.word;
      e.context = entry.contexts[i];
      e.definition = entry.definitions[i];
      e.sense_index = i;
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace mdm::splits
