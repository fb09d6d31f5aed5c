#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mdm/builder.hpp"

namespace mdm::splits {

// Novel-sense holdout: `d` senses of each eligible word (with all of their
// usage examples) go to test, the rest to train.
struct HoldoutSplit {
  std::vector<SdmEntry> train;
  std::vector<SdmEntry> test;
  std::size_t d = 1;
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<std::size_t>> held_out;  // word -> sorted sense indices
};

/// Words with more than d distinct sense indices lose d of them, chosen
/// uniformly with the per-word generator; other words stay in train. Input
/// order is preserved within train and test.
HoldoutSplit BuildDel(const std::vector<SdmEntry>& sdm, std::size_t d, std::uint64_t seed);

struct Prediction {
  std::string word;
  std::size_t context_index = 0;
  std::string prediction;
};

struct GroupedPrediction {
  std::string word;
  std::string prediction;  // predictions joined with " <sep> " in context order
  std::string reference;   // gold definitions joined the same way

  bool operator==(const GroupedPrediction&) const = default;
};

/// One output per reference entry, in reference order. Every context slot of
/// every reference entry needs exactly one prediction; the error names the
/// first missing or duplicated slot as "word#index".
std::vector<GroupedPrediction> GroupPredictions(const std::vector<Prediction>& preds,
                                                const std::vector<MdmEntry>& reference_order);

/// One SdmEntry per (context, definition) pair; sense_index is the position
/// inside the entry. Throws for unaligned entries.
std::vector<SdmEntry> Ungroup(const std::vector<MdmEntry>& mdm);

}  // namespace mdm::splits
