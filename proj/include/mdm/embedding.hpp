#pragma once

#include <string>
#include <unordered_map>

#include <Eigen/Dense>

namespace mdm::metrics {

// Token vectors for greedy-matching similarity; stands in for contextual
// encoder embeddings.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(Eigen::Index dim = 0) : dim_(dim) {}

  /// Throws on wrong length, NaN components or a non-positive dimension.
  void Add(const std::string& token, Eigen::VectorXd vector);

  const Eigen::VectorXd* Find(const std::string& token) const;

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }

 private:
  Eigen::Index dim_;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

/// TSV "token\tv1\t...\tvd"; the first row fixes d.
EmbeddingTable LoadEmbeddings(const std::string& path);
EmbeddingTable ParseEmbeddings(const std::string& text, const std::string& source_name);

/// Cosine similarity; 0 when either vector is zero.
double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace mdm::metrics
