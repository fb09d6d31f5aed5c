#include "mdm/embedding.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "mdm/error.hpp"

namespace mdm::metrics {

void EmbeddingTable::Add(const std::string& token, Eigen::VectorXd vector) {
  if (dim_ <= 0) dim_ = vector.size();
  if (dim_ <= 0) throw ConfigError("embedding dimension must be positive");
  if (vector.size() != dim_) {
    throw IoError("embedding for '" + token + "' has length " + std::to_string(vector.size()) +
                  ", expected " + std::to_string(dim_));
  }
  if (vector.hasNaN()) throw IoError("embedding for '" + token + "' contains NaN");
  vectors_.insert_or_assign(token, std::move(vector));
}

const Eigen::VectorXd* EmbeddingTable::Find(const std::string& token) const {
  const auto it = vectors_.find(token);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable ParseEmbeddings(const std::string& text, const std::string& source_name) {
  EmbeddingTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw IoError(source_name + ":" + std::to_string(line_no) + ": expected token<TAB>values");
    }
    std::vector<double> values;
    std::size_t start = tab + 1;
    while (start <= line.size()) {
      auto end = line.find('\t', start);
      if (end == std::string::npos) end = line.size();
      const std::string field = line.substr(start, end - start);
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != field.size()) {
        throw IoError(source_name + ":" + std::to_string(line_no) + ": bad number '" + field + "'");
      }
      values.push_back(v);
      start = end + 1;
    }
    try {
      table.Add(line.substr(0, tab), Eigen::Map<Eigen::VectorXd>(values.data(),
                                                                  static_cast<Eigen::Index>(values.size())));
    } catch (const Error& e) {
      throw IoError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (table.empty()) throw IoError(source_name + ": empty embedding table");
  return table;
}

EmbeddingTable LoadEmbeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embeddings: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseEmbeddings(buffer.str(), path);
}

double Cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

}  // namespace mdm::metrics
