#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>

namespace nmr {

using Scalar = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when a NaN/Inf enters solver state. The drivers convert it into a
/// numerical-failure termination instead of letting it propagate.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nmr
