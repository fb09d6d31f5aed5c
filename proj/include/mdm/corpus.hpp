#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mdm::corpus {

/// Lowercases ASCII letters, splits on whitespace and peels punctuation off
/// word cores. A chunk without any letter or digit ("@-@", "...") is kept as a
/// single token; apostrophes and hyphens inside a word stay in it.
std::vector<std::string> Tokenize(std::string_view text);

/// Title abbreviations that do not end a sentence (stored lowercase, without
/// the trailing period).
const std::set<std::string>& DefaultAbbreviations();

/// Splits on line breaks and after ". ! ?" that end a whitespace-delimited
/// chunk, unless that chunk is a known abbreviation. Sentences are trimmed;
/// empty ones are dropped.
std::vector<std::string> SplitSentences(std::string_view document,
                                        const std::set<std::string>& abbreviations =
                                            DefaultAbbreviations());

enum class DocumentMode {
  kFile,   // one document per input file
  kBlock,  // blank-line separated blocks inside each file
};

/// Reads input files into documents, in argument order.
std::vector<std::string> ReadDocuments(const std::vector<std::string>& paths,
                                       DocumentMode mode);

struct Sentence {
  std::uint32_t id = 0;
  std::vector<std::string> tokens;
  std::string raw;

  bool operator==(const Sentence&) const = default;
};

struct IndexOptions {
  std::size_t min_count = 5;
  std::size_t jobs = 1;
  std::set<std::string> abbreviations = DefaultAbbreviations();
};

/// Word -> sentence inverted index over a corpus. Immutable once built.
class CorpusIndex {
 public:
  CorpusIndex() = default;

  /// Sentence ids follow document order, then sentence order within a
  /// document. Words below options.min_count are not indexed. The result does
  /// not depend on options.jobs.
  static CorpusIndex Build(const std::vector<std::string>& documents,
                           const IndexOptions& options);

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const std::map<std::string, std::vector<std::uint32_t>>& postings() const { return postings_; }
  const std::map<std::string, std::size_t>& frequency() const { return frequency_; }
  std::size_t min_count() const { return min_count_; }

  /// Empty when the word is absent or was filtered out.
  const std::vector<std::uint32_t>& Postings(const std::string& word) const;
  std::size_t Frequency(const std::string& word) const;

  /// Versioned JSON; byte-stable for equal indexes.
  std::string Serialize() const;
  static CorpusIndex Deserialize(std::string_view text);

  bool operator==(const CorpusIndex&) const = default;

 private:
  std::vector<Sentence> sentences_;
  std::map<std::string, std::vector<std::uint32_t>> postings_;
  std::map<std::string, std::size_t> frequency_;
  std::size_t min_count_ = 1;
};

}  // namespace mdm::corpus
