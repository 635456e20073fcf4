#pragma once

#include <random>
#include <vector>

#include "nmr/types.hpp"

namespace nmr {

using Rng = std::mt19937_64;

// The stdlib distributions are implementation-defined, so all sampling here
// is built from raw engine output to keep runs byte-reproducible across
// toolchains.

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal via Box-Muller.
double gaussian(Rng& rng);

Vector gaussian_vector(Index d, Rng& rng);

/// Uniform draw from the unit sphere in R^d. A zero draw (probability zero)
/// is redrawn.
Vector unit_sphere(Index d, Rng& rng);

/// Random d x d orthonormal matrix: QR of a Gaussian matrix with the sign of
/// each R diagonal fixed, which makes the draw deterministic in the seed.
Matrix random_orthonormal(Index d, Rng& rng);

/// k indices sampled without replacement from {0, ..., n-1}, returned sorted.
std::vector<Index> sample_without_replacement(Index n, Index k, Rng& rng);

}  // namespace nmr
