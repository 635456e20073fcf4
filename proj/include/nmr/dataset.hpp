#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nmr/types.hpp"

namespace nmr {

/// Dense feature matrix (one row per sample) with binary labels.
struct Dataset {
  Matrix features;          // n x d
  std::vector<int> labels;  // values in {0, 1}

  Index n() const { return features.rows(); }
  Index d() const { return features.cols(); }
  void validate() const;
};

/// Maps raw numeric labels to {0, 1}.
struct LabelRule {
  enum class Kind { Sign, Parity, Threshold };
  Kind kind = Kind::Sign;
  double threshold = 0.0;

  int map(double raw) const;
  /// Accepts "sign", "parity", "threshold:<c>".
  static LabelRule parse(const std::string& text);
};

/// LIBSVM-style text: "label idx:val idx:val ...", 1-based indices. The
/// feature dimension is the largest index seen. Malformed lines, duplicate
/// indices within a line, and empty files are errors reported with the line
/// number.
Dataset load_libsvm(const std::string& path, const LabelRule& rule);

/// Two Gaussian blobs with unit covariance at +m and -m, m = ones/sqrt(d);
/// first half labeled 1, second half 0.
Dataset make_blobs(Index n, Index d, std::uint64_t seed);

}  // namespace nmr
