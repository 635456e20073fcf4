#include "nmr/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "nmr/random.hpp"

namespace nmr {

void Dataset::validate() const {
  if (features.rows() != static_cast<Index>(labels.size()))
    throw std::invalid_argument("dataset: row count does not match label count");
  if (!features.allFinite()) throw std::invalid_argument("dataset: non-finite feature value");
  for (int l : labels)
    if (l != 0 && l != 1) throw std::invalid_argument("dataset: labels must be 0/1");
}

int LabelRule::map(double raw) const {
  switch (kind) {
    case Kind::Sign: return raw > 0.0 ? 1 : 0;
    case Kind::Parity: return static_cast<int>(std::llabs(std::llround(raw)) % 2);
    case Kind::Threshold: return raw > threshold ? 1 : 0;
  }
  return 0;
}

LabelRule LabelRule::parse(const std::string& text) {
  LabelRule rule;
  if (text == "sign") {
    rule.kind = Kind::Sign;
  } else if (text == "parity") {
    rule.kind = Kind::Parity;
  } else if (text.rfind("threshold:", 0) == 0) {
    rule.kind = Kind::Threshold;
    rule.threshold = std::stod(text.substr(10));
  } else {
    throw std::invalid_argument("unknown label rule: " + text);
  }
  return rule;
}

Dataset load_libsvm(const std::string& path, const LabelRule& rule) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open dataset file: " + path);

  struct Row {
    int label;
    std::vector<std::pair<Index, double>> entries;
  };
  std::vector<Row> rows;
  Index max_index = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double raw_label;
    if (!(ls >> raw_label))
      throw std::runtime_error("line " + std::to_string(line_no) + ": missing label");
    Row row;
    row.label = rule.map(raw_label);
    std::unordered_set<Index> seen;
    std::string tok;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": malformed feature '" + tok + "'");
      Index idx;
      double val;
      try {
        idx = static_cast<Index>(std::stoll(tok.substr(0, colon)));
        val = std::stod(tok.substr(colon + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": malformed feature '" + tok + "'");
      }
      if (idx < 1)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": feature indices are 1-based");
      if (!std::isfinite(val))
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": non-finite feature value");
      if (!seen.insert(idx).second)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": duplicate feature index " + std::to_string(idx));
      row.entries.emplace_back(idx - 1, val);
      max_index = std::max(max_index, idx);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("dataset file is empty: " + path);

  Dataset ds;
  ds.features = Matrix::Zero(static_cast<Index>(rows.size()), max_index);
  ds.labels.reserve(rows.size());
  for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
    const Row& row = rows[static_cast<std::size_t>(i)];
    ds.labels.push_back(row.label);
    for (const auto& [j, v] : row.entries) ds.features(i, j) = v;
  }
  ds.validate();
  return ds;
}

Dataset make_blobs(Index n, Index d, std::uint64_t seed) {
  if (n < 2 || d < 1) throw std::invalid_argument("make_blobs: need n >= 2, d >= 1");
  Rng rng(seed);
  const Vector mean = Vector::Ones(d) / std::sqrt(static_cast<double>(d));
  Dataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const bool positive = i < n / 2;
    for (Index j = 0; j < d; ++j)
      ds.features(i, j) = gaussian(rng) + (positive ? mean[j] : -mean[j]);
    ds.labels[static_cast<std::size_t>(i)] = positive ? 1 : 0;
  }
  return ds;
}

}  // namespace nmr
