#pragma once

#include <cstdint>

namespace nmr {

/// Work accounting in "oracle calls": a function value costs 1, a gradient 2,
/// and a full Hessian-vector product 4. A sub-sampled product is charged
/// 4 * fraction, so the weighted total of a run is comparable across
/// sampling levels.
struct OracleCounter {
  std::int64_t function_calls = 0;
  std::int64_t gradient_calls = 0;
  std::int64_t hvp_calls = 0;
  double weighted_total = 0.0;

  void add_function(std::int64_t n = 1) {
    function_calls += n;
    weighted_total += static_cast<double>(n);
  }
  void add_gradient(std::int64_t n = 1) {
    gradient_calls += n;
    weighted_total += 2.0 * static_cast<double>(n);
  }
  /// weight is the per-apply cost of the operator, i.e. 4 * sample fraction.
  void add_hvp(double weight) {
    hvp_calls += 1;
    weighted_total += weight;
  }

  void merge(const OracleCounter& other) {
    function_calls += other.function_calls;
    gradient_calls += other.gradient_calls;
    hvp_calls += other.hvp_calls;
    weighted_total += other.weighted_total;
  }
};

}  // namespace nmr
