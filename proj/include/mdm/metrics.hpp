#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdm/builder.hpp"
#include "mdm/embedding.hpp"

namespace mdm::metrics {

struct TextPair {
  std::string candidate;
  std::string reference;
};

struct EntryScore {
  std::size_t id = 0;
  std::optional<double> score;  // in [0, 1]; empty when the entry was skipped
  std::optional<double> precision;
  std::optional<double> recall;
  std::string note;  // e.g. "empty_candidate", "skipped"

  bool operator==(const EntryScore&) const = default;
};

struct MetricReport {
  std::string name;
  double corpus_score = 0.0;  // in [0, 100]
  std::vector<EntryScore> per_entry;
  std::map<std::string, std::string> config;
  std::map<std::string, double> stats;

  bool operator==(const MetricReport&) const = default;
};

/// Whitespace split; metrics are case-sensitive and treat "<sep>" as a token.
std::vector<std::string> SplitTokens(const std::string& text);

enum class BleuVariant { kCorpus, kSentenceAverage };

struct BleuOptions {
  std::size_t max_n = 4;
  BleuVariant variant = BleuVariant::kCorpus;
};

// Corpus variant pools clipped n-gram matches and lengths over all pairs;
// orders no candidate is long enough for are left out of the geometric mean.
// Sentence variant averages per-pair scores where a zero match count at
// order >= 2 is replaced by (m + 1) / (t + 1). Per-entry scores are always
// the smoothed sentence scores.
MetricReport Bleu(const std::vector<TextPair>& pairs, const BleuOptions& options = {},
                  std::size_t jobs = 1);

/// F1 of clipped n-gram overlap, averaged over pairs. Throws on an empty reference.
MetricReport RougeN(const std::vector<TextPair>& pairs, std::size_t n, std::size_t jobs = 1);

/// F1 from the token LCS, averaged over pairs. Throws on an empty reference.
MetricReport RougeL(const std::vector<TextPair>& pairs, std::size_t jobs = 1);

std::size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Greedy matching of token embeddings: each candidate token takes its best
/// cosine against the reference tokens (clamped to [0, 1]; identical tokens
/// score exactly 1) for precision, and symmetrically for recall. Tokens
/// missing from the table are skipped; a side with no known token makes the
/// entry skipped.
MetricReport GreedyMatch(const std::vector<TextPair>& pairs, const EmbeddingTable& table,
                         std::size_t jobs = 1);

struct Distinct {
  double intra = 0.0;  // in [0, 100]
  double inter = 0.0;  // in [0, 100]
};

/// predictions[e] holds the definitions generated for entry e. Definitions
/// shorter than n tokens count as fully distinct.
Distinct DistinctN(const std::vector<std::vector<std::string>>& predictions, std::size_t n);

/// Report form of DistinctN: corpus_score is intra, per-entry scores are inter.
MetricReport DistinctReport(const std::vector<std::vector<std::string>>& predictions,
                            std::size_t n);

/// Percentage of definitions that contain their headword as a token.
double OverlapRate(const std::vector<std::pair<std::string, std::vector<std::string>>>& entries);

struct DatasetStats {
  std::size_t entries = 0;
  double mean_context_tokens = 0.0;  // per entry, all contexts together
  double mean_contexts = 0.0;        // N
  double mean_definitions = 0.0;     // M
  double mean_definition_tokens = 0.0;

  bool operator==(const DatasetStats&) const = default;
};

DatasetStats ComputeDatasetStats(const std::vector<MdmEntry>& dataset);

}  // namespace mdm::metrics
