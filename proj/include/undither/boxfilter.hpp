#pragma once

#include <stdexcept>
#include <type_traits>

#include "undither/image.hpp"

namespace undither {

struct BoxFilterSpec {
  int window = 3;  // odd, >= 3
  int passes = 2;  // >= 1

  void validate() const {
    if (window < 3 || window % 2 == 0)
      throw std::invalid_argument("box filter window must be odd and >= 3");
    if (passes < 1)
      throw std::invalid_argument("box filter passes must be >= 1");
  }
};

namespace detail {

inline Eigen::Index clamp_index(Eigen::Index i, Eigen::Index n) {
  return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

// One separable pass: mean over the clamped 1-D window along each axis in
// turn; the clamped 2-D window factorizes per axis, so this equals the
// direct windowed mean with replicate-edge extension.
template <typename Scalar>
Image<Scalar> box_pass(const Image<Scalar>& img, int window) {
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  const Eigen::Index r = window / 2;
  const Scalar inv = Scalar(1) / Scalar(window);

  Image<Scalar> horiz(h, w);
  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      Scalar sum = 0;
      for (Eigen::Index k = -r; k <= r; ++k)
        sum += img(i, clamp_index(j + k, w));
      horiz(i, j) = sum * inv;
    }
  }

  Image<Scalar> out(h, w);
  for (Eigen::Index j = 0; j < w; ++j) {
    for (Eigen::Index i = 0; i < h; ++i) {
      Scalar sum = 0;
      for (Eigen::Index k = -r; k <= r; ++k)
        sum += horiz(clamp_index(i + k, h), j);
      out(i, j) = sum * inv;
    }
  }
  return out;
}

}  // namespace detail

// `passes` sequential applications of the window x window average filter
// with replicate-edge borders. Constant images are exact fixed points.
template <typename Scalar>
Image<Scalar> box_filter(const Image<Scalar>& img, const BoxFilterSpec& spec) {
  static_assert(std::is_floating_point_v<Scalar>);
  spec.validate();

  Image<Scalar> out = img;
  for (int pass = 0; pass < spec.passes; ++pass)
    out = detail::box_pass(out, spec.window);
  return out;
}

}  // namespace undither
