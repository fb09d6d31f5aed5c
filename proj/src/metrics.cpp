#include "mdm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mdm/corpus.hpp"
#include "mdm/error.hpp"
#include "mdm/parallel.hpp"

namespace mdm::metrics {
namespace {

using Counts = std::unordered_map<std::string, std::size_t>;

// N-grams are keyed by their tokens joined with a unit separator.
std::string NgramKey(const std::vector<std::string>& tokens, std::size_t begin, std::size_t n) {
  std::string key = tokens[begin];
  for (std::size_t i = 1; i < n; ++i) {
    key += '\x1f';
    key += tokens[begin + i];
  }
  return key;
}

std::size_t NgramTotal(const std::vector<std::string>& tokens, std::size_t n) {
  return tokens.size() >= n ? tokens.size() - n + 1 : 0;
}

Counts CountNgrams(const std::vector<std::string>& tokens, std::size_t n) {
  Counts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) ++counts[NgramKey(tokens, i, n)];
  return counts;
}

std::size_t ClippedMatches(const Counts& candidate, const Counts& reference) {
  std::size_t matches = 0;
  for (const auto& [gram, count] : candidate) {
    const auto it = reference.find(gram);
    if (it != reference.end()) matches += std::min(count, it->second);
  }
  return matches;
}

double F1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

double Mean(const std::vector<EntryScore>& entries) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (!e.score) continue;
    sum += *e.score;
    ++n;
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

void RequirePairs(const std::vector<TextPair>& pairs) {
  if (pairs.empty()) throw ConfigError("no candidate/reference pairs to score");
}

struct BleuStats {
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;
  std::vector<std::size_t> matches;  // per order, index n - 1
  std::vector<std::size_t> totals;
};

BleuStats CollectBleu(const TextPair& pair, std::size_t max_n) {
  const auto c = SplitTokens(pair.candidate);
  const auto r = SplitTokens(pair.reference);
  BleuStats s;
  s.candidate_length = c.size();
  s.reference_length = r.size();
  for (std::size_t n = 1; n <= max_n; ++n) {
    s.matches.push_back(ClippedMatches(CountNgrams(c, n), CountNgrams(r, n)));
    s.totals.push_back(NgramTotal(c, n));
  }
  return s;
}

double BrevityPenalty(std::size_t c, std::size_t r) {
  if (c > r) return 1.0;
  return std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
}

double SmoothedSentenceBleu(const BleuStats& s) {
  if (s.candidate_length == 0 || s.matches[0] == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < s.matches.size(); ++i) {
    const double m = static_cast<double>(s.matches[i]);
    const double t = static_cast<double>(s.totals[i]);
    log_sum += s.matches[i] > 0 ? std::log(m / t) : std::log(1.0 / (t + 1.0));
  }
  return BrevityPenalty(s.candidate_length, s.reference_length) *
         std::exp(log_sum / static_cast<double>(s.matches.size()));
}

double CorpusBleu(const std::vector<BleuStats>& stats, std::size_t max_n) {
  std::size_t c = 0;
  std::size_t r = 0;
  std::vector<std::size_t> matches(max_n, 0);
  std::vector<std::size_t> totals(max_n, 0);
  for (const auto& s : stats) {
    c += s.candidate_length;
    r += s.reference_length;
    for (std::size_t i = 0; i < max_n; ++i) {
      matches[i] += s.matches[i];
      totals[i] += s.totals[i];
    }
  }
  if (c == 0) return 0.0;
  double log_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t i = 0; i < max_n; ++i) {
    if (totals[i] == 0) continue;
    if (matches[i] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matches[i]) / static_cast<double>(totals[i]));
    ++orders;
  }
  return BrevityPenalty(c, r) * std::exp(log_sum / static_cast<double>(orders));
}

std::vector<std::string> CheckedReference(const TextPair& pair, std::size_t id) {
  auto r = SplitTokens(pair.reference);
  if (r.empty()) throw ConfigError("empty reference at entry " + std::to_string(id));
  return r;
}

}  // namespace

std::vector<std::string> SplitTokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && space(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !space(text[i])) ++i;
    if (i > begin) tokens.emplace_back(text, begin, i - begin);
  }
  return tokens;
}

MetricReport Bleu(const std::vector<TextPair>& pairs, const BleuOptions& options,
                  std::size_t jobs) {
  RequirePairs(pairs);
  if (options.max_n < 1) throw ConfigError("BLEU max_n must be >= 1");
  std::vector<BleuStats> stats(pairs.size());
  MetricReport report;
  report.name = "bleu";
  report.per_entry.resize(pairs.size());
  ParallelFor(pairs.size(), jobs, [&](std::size_t i) {
    stats[i] = CollectBleu(pairs[i], options.max_n);
    auto& e = report.per_entry[i];
    e.id = i;
    e.score = SmoothedSentenceBleu(stats[i]);
    if (stats[i].candidate_length == 0) e.note = "empty_candidate";
  });
  const bool corpus = options.variant == BleuVariant::kCorpus;
  report.corpus_score = 100.0 * (corpus ? CorpusBleu(stats, options.max_n) : Mean(report.per_entry));
  report.config = {{"max_n", std::to_string(options.max_n)},
                   {"variant", corpus ? "corpus" : "sentence_avg"},
                   {"smoothing", corpus ? "none" : "add_one_zero_counts"},
                   {"tokenization", "whitespace"}};
  return report;
}

MetricReport RougeN(const std::vector<TextPair>& pairs, std::size_t n, std::size_t jobs) {
  RequirePairs(pairs);
  if (n < 1) throw ConfigError("ROUGE-N order must be >= 1");
  MetricReport report;
  report.name = "rouge" + std::to_string(n);
  report.per_entry.resize(pairs.size());
  ParallelFor(pairs.size(), jobs, [&](std::size_t i) {
    const auto r = CheckedReference(pairs[i], i);
    const auto c = SplitTokens(pairs[i].candidate);
    auto& e = report.per_entry[i];
    e.id = i;
    const std::size_t tc = NgramTotal(c, n);
    const std::size_t tr = NgramTotal(r, n);
    if (tc == 0 && tr == 0) {
      // Neither side is long enough to have an n-gram.
      const double same = c == r ? 1.0 : 0.0;
      e.precision = e.recall = e.score = same;
      e.note = "shorter_than_n";
      return;
    }
    const double overlap = static_cast<double>(ClippedMatches(CountNgrams(c, n), CountNgrams(r, n)));
    e.precision = tc ? overlap / static_cast<double>(tc) : 0.0;
    e.recall = tr ? overlap / static_cast<double>(tr) : 0.0;
    e.score = F1(*e.precision, *e.recall);
    if (c.empty()) e.note = "empty_candidate";
  });
  report.corpus_score = 100.0 * Mean(report.per_entry);
  report.config = {{"n", std::to_string(n)},
                   {"aggregate", "mean_f1"},
                   {"tokenization", "whitespace"}};
  return report;
}

std::size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

MetricReport RougeL(const std::vector<TextPair>& pairs, std::size_t jobs) {
  RequirePairs(pairs);
  MetricReport report;
  report.name = "rougeL";
  report.per_entry.resize(pairs.size());
  ParallelFor(pairs.size(), jobs, [&](std::size_t i) {
    const auto r = CheckedReference(pairs[i], i);
    const auto c = SplitTokens(pairs[i].candidate);
    auto& e = report.per_entry[i];
    e.id = i;
    const double lcs = static_cast<double>(LcsLength(c, r));
    e.precision = c.empty() ? 0.0 : lcs / static_cast<double>(c.size());
    e.recall = lcs / static_cast<double>(r.size());
    e.score = F1(*e.precision, *e.recall);
    if (c.empty()) e.note = "empty_candidate";
  });
  report.corpus_score = 100.0 * Mean(report.per_entry);
  report.config = {{"aggregate", "mean_f1"}, {"beta", "1"}, {"tokenization", "whitespace"}};
  return report;
}

MetricReport GreedyMatch(const std::vector<TextPair>& pairs, const EmbeddingTable& table,
                         std::size_t jobs) {
  RequirePairs(pairs);
  if (table.empty()) throw ConfigError("embedding table is empty");

  struct Side {
    std::vector<std::string> tokens;
    std::vector<const Eigen::VectorXd*> vectors;
  };
  const auto known = [&](const std::string& text, std::size_t& total) {
    Side side;
    for (auto& t : SplitTokens(text)) {
      ++total;
      if (const auto* v = table.Find(t)) {
        side.vectors.push_back(v);
        side.tokens.push_back(std::move(t));
      }
    }
    return side;
  };
  // Mean over `from` tokens of the best similarity against `to` tokens.
  const auto directed = [](const Side& from, const Side& to) {
    double sum = 0.0;
    for (std::size_t i = 0; i < from.tokens.size(); ++i) {
      double best = 0.0;
      for (std::size_t j = 0; j < to.tokens.size() && best < 1.0; ++j) {
        const double sim = from.tokens[i] == to.tokens[j]
                               ? 1.0
                               : std::clamp(Cosine(*from.vectors[i], *to.vectors[j]), 0.0, 1.0);
        best = std::max(best, sim);
      }
      sum += best;
    }
    return sum / static_cast<double>(from.tokens.size());
  };

  MetricReport report;
  report.name = "greedy_match";
  report.per_entry.resize(pairs.size());
  std::vector<std::size_t> total_tokens(pairs.size(), 0);
  std::vector<std::size_t> found_tokens(pairs.size(), 0);
  ParallelFor(pairs.size(), jobs, [&](std::size_t i) {
    const Side c = known(pairs[i].candidate, total_tokens[i]);
    const Side r = known(pairs[i].reference, total_tokens[i]);
    found_tokens[i] = c.tokens.size() + r.tokens.size();
    auto& e = report.per_entry[i];
    e.id = i;
    if (c.tokens.empty() || r.tokens.empty()) {
      e.note = "skipped";
      return;
    }
    e.precision = directed(c, r);
    e.recall = directed(r, c);
    e.score = F1(*e.precision, *e.recall);
  });

  std::size_t total = 0;
  std::size_t found = 0;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    total += total_tokens[i];
    found += found_tokens[i];
    skipped += report.per_entry[i].score ? 0 : 1;
  }
  report.corpus_score = 100.0 * Mean(report.per_entry);
  report.stats = {{"coverage", total ? static_cast<double>(found) / static_cast<double>(total) : 0.0},
                  {"tokens_total", static_cast<double>(total)},
                  {"tokens_found", static_cast<double>(found)},
                  {"skipped_entries", static_cast<double>(skipped)}};
  report.config = {{"dim", std::to_string(table.dim())},
                   {"similarity", "cosine_clamped"},
                   {"aggregate", "mean_f1"},
                   {"tokenization", "whitespace"}};
  return report;
}

namespace {

struct DistinctEntry {
  std::vector<double> intra;  // one per definition
  double inter = 1.0;
};

DistinctEntry ScoreDistinct(const std::vector<std::string>& definitions, std::size_t n) {
  DistinctEntry out;
  std::unordered_set<std::string> pooled;
  std::size_t pooled_total = 0;
  for (const auto& def : definitions) {
    const auto tokens = SplitTokens(def);
    const std::size_t total = NgramTotal(tokens, n);
    std::unordered_set<std::string> unique;
    for (std::size_t i = 0; i < total; ++i) {
      auto key = NgramKey(tokens, i, n);
      unique.insert(key);
      pooled.insert(std::move(key));
    }
    pooled_total += total;
    out.intra.push_back(total ? static_cast<double>(unique.size()) / static_cast<double>(total) : 1.0);
  }
  if (pooled_total) out.inter = static_cast<double>(pooled.size()) / static_cast<double>(pooled_total);
  return out;
}

}  // namespace

Distinct DistinctN(const std::vector<std::vector<std::string>>& predictions, std::size_t n) {
  if (n < 1) throw ConfigError("Distinct-N order must be >= 1");
  if (predictions.empty()) throw ConfigError("no predictions for Distinct-N");
  double intra_sum = 0.0;
  std::size_t definitions = 0;
  double inter_sum = 0.0;
  for (std::size_t e = 0; e < predictions.size(); ++e) {
    if (predictions[e].empty()) {
      throw ConfigError("entry " + std::to_string(e) + " has no predicted definitions");
    }
    const auto scored = ScoreDistinct(predictions[e], n);
    for (double v : scored.intra) intra_sum += v;
    definitions += scored.intra.size();
    inter_sum += scored.inter;
  }
  return {100.0 * intra_sum / static_cast<double>(definitions),
          100.0 * inter_sum / static_cast<double>(predictions.size())};
}

MetricReport DistinctReport(const std::vector<std::vector<std::string>>& predictions,
                            std::size_t n) {
  const Distinct d = DistinctN(predictions, n);
  MetricReport report;
  report.name = "distinct" + std::to_string(n);
  report.corpus_score = d.intra;
  for (std::size_t e = 0; e < predictions.size(); ++e) {
    EntryScore s;
    s.id = e;
    s.score = ScoreDistinct(predictions[e], n).inter;
    report.per_entry.push_back(std::move(s));
  }
  report.stats = {{"intra", d.intra}, {"inter", d.inter}};
  report.config = {{"n", std::to_string(n)},
                   {"short_definition", "counts_as_1"},
                   {"inter_scope", "per_entry_mean"},
                   {"tokenization", "whitespace"}};
  return report;
}

double OverlapRate(const std::vector<std::pair<std::string, std::vector<std::string>>>& entries) {
  std::size_t total = 0;
  std::size_t overlapping = 0;
  for (const auto& [word, definitions] : entries) {
    const auto head = corpus::Tokenize(word);
    const std::string key = head.size() == 1 ? head.front() : std::string();
    for (const auto& def : definitions) {
      ++total;
      if (key.empty()) continue;
      const auto tokens = corpus::Tokenize(def);
      if (std::find(tokens.begin(), tokens.end(), key) != tokens.end()) ++overlapping;
    }
  }
  return total ? 100.0 * static_cast<double>(overlapping) / static_cast<double>(total) : 0.0;
}

DatasetStats ComputeDatasetStats(const std::vector<MdmEntry>& dataset) {
  DatasetStats stats;
  stats.entries = dataset.size();
  if (dataset.empty()) return stats;
  double context_tokens = 0.0;
  double definition_tokens = 0.0;
  double contexts = 0.0;
  double definitions = 0.0;
  for (const auto& e : dataset) {
    for (const auto& c : e.contexts) context_tokens += static_cast<double>(SplitTokens(c).size());
    for (const auto& d : e.definitions) definition_tokens += static_cast<double>(SplitTokens(d).size());
    contexts += static_cast<double>(e.contexts.size());
    definitions += static_cast<double>(e.definitions.size());
  }
  const double n = static_cast<double>(dataset.size());
  stats.mean_context_tokens = context_tokens / n;
  stats.mean_definition_tokens = definition_tokens / n;
  stats.mean_contexts = contexts / n;
  stats.mean_definitions = definitions / n;
  return stats;
}

}  // namespace mdm::metrics
