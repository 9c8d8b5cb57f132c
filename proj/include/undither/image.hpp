#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>

#include "undither/errors.hpp"

namespace undither {

// Row-major so that data() matches raster order (and the PGM payload).
// rows() is the image height, cols() the width.
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// 8-bit raster, the dithering / codec currency.
using GrayImage = Image<std::uint8_t>;

// Real-valued raster, the filtering / diffusion currency. Values are
// nominally in [0, 255] but are not clamped while diffusing.
using FloatImage = Image<double>;

inline bool same_size(const GrayImage& a, const GrayImage& b) {
  return a.rows() == b.rows() && a.cols() == b.cols();
}

FloatImage to_float(const GrayImage& img);

// Rounds half-up (floor(x + 0.5)), then clamps to [0, 255].
// Throws NumericalError if any value is NaN.
GrayImage to_gray(const FloatImage& img);

struct Histogram {
  static constexpr int levels = 256;

  std::array<std::int64_t, levels> counts{};
  std::int64_t total = 0;

  // p(r_k) = n_k / n
  double probability(int level) const {
    return static_cast<double>(counts[static_cast<std::size_t>(level)]) /
           static_cast<double>(total);
  }
};

Histogram histogram(const GrayImage& img);

}  // namespace undither
