#include "undither/image.hpp"

#include <cmath>

namespace undither {

FloatImage to_float(const GrayImage& img) {
  return img.cast<double>();
}

GrayImage to_gray(const FloatImage& img) {
  if (img.isNaN().any())
    throw NumericalError("to_gray: image contains NaN");

  return img.unaryExpr([](double v) {
    const double rounded = std::floor(v + 0.5);  // half-up
    if (rounded < 0.0) return std::uint8_t{0};
    if (rounded > 255.0) return std::uint8_t{255};
    return static_cast<std::uint8_t>(rounded);
  });
}

Histogram histogram(const GrayImage& img) {
  Histogram h;
  const std::uint8_t* p = img.data();
  const std::uint8_t* end = p + img.size();
  for (; p != end; ++p) ++h.counts[*p];
  h.total = img.size();
  return h;
}

}  // namespace undither
