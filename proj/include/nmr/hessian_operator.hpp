#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "nmr/oracle_counter.hpp"
#include "nmr/random.hpp"
#include "nmr/types.hpp"

namespace nmr {

/// Declared construction of an additive symmetric noise E with ||E|| <= epsilon.
/// For the explicit random construction the realized norm equals epsilon.
struct NoiseSpec {
  enum class Construction : std::uint8_t { Subsample, ExplicitRandom };
  double epsilon = 0.0;
  Construction construction = Construction::ExplicitRandom;
};

/// Matrix-free symmetric operator v -> Hv. An instance freezes whatever
/// randomness it was built from (sub-sample indices, noise matrix), so within
/// one outer iteration the inner Krylov solver sees a fixed linear operator.
class HessianOperator {
 public:
  enum class Kind : std::uint8_t { Exact, Subsampled, Noisy, Shifted };

  using ApplyFn = std::function<Vector(const Vector&)>;

  HessianOperator(Index dimension, ApplyFn apply, double cost_per_apply,
                  Kind kind = Kind::Exact,
                  std::optional<NoiseSpec> noise = std::nullopt)
      : dimension_(dimension),
        apply_(std::move(apply)),
        cost_per_apply_(cost_per_apply),
        kind_(kind),
        noise_(noise) {
    if (dimension_ <= 0) throw std::invalid_argument("operator dimension must be positive");
    if (cost_per_apply_ < 0.0) throw std::invalid_argument("cost_per_apply must be nonnegative");
    if (noise_ && noise_->epsilon < 0.0)
      throw std::invalid_argument("declared noise bound must be nonnegative");
  }

  Index dimension() const { return dimension_; }
  double cost_per_apply() const { return cost_per_apply_; }
  Kind kind() const { return kind_; }
  const std::optional<NoiseSpec>& noise() const { return noise_; }

  /// Raw application, no accounting. Diagnostics only.
  Vector operator()(const Vector& v) const;

  /// Counted application; the solver path always goes through here.
  /// Dimension mismatch is a usage error, NaN/Inf in the result aborts.
  Vector apply(const Vector& v, OracleCounter& counter) const;

  /// H + shift * I with the same per-apply cost (the shift is vector work).
  HessianOperator shifted(double shift) const;

  static HessianOperator from_dense(const Matrix& h, double cost_per_apply = 4.0,
                                    Kind kind = Kind::Exact,
                                    std::optional<NoiseSpec> noise = std::nullopt);

 private:
  Index dimension_;
  ApplyFn apply_;
  double cost_per_apply_;
  Kind kind_;
  std::optional<NoiseSpec> noise_;
};

/// Lower-bound estimate of ||H|| that converges to it; power iteration on H^2
/// so indefinite spectra with |lambda_min| ~ lambda_max still converge.
/// Diagnostics only, never on the solver path.
double spectral_norm_estimate(const HessianOperator& op, int iters, std::uint64_t seed);

/// Materializes the operator column by column. Diagnostic scale only.
Matrix materialize(const HessianOperator& op);

}  // namespace nmr
