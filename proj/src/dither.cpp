#include "undither/dither.hpp"

#include <stdexcept>

namespace undither {

GrayImage dither_floyd_steinberg(const GrayImage& img) {
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();

  FloatImage work = img.cast<double>();
  GrayImage out(h, w);

  for (Eigen::Index i = 0; i < h; ++i) {
    for (Eigen::Index j = 0; j < w; ++j) {
      const double v = work(i, j);
      const std::uint8_t q = v >= 128.0 ? 255 : 0;
      out(i, j) = q;
      const double e = v - q;

      if (j + 1 < w) work(i, j + 1) += e * (7.0 / 16.0);
      if (i + 1 < h) {
        if (j > 0) work(i + 1, j - 1) += e * (3.0 / 16.0);
        work(i + 1, j) += e * (5.0 / 16.0);
        if (j + 1 < w) work(i + 1, j + 1) += e * (1.0 / 16.0);
      }
      // shares falling outside the image are dropped
    }
  }
  return out;
}

Image<int> bayer_matrix(int order) {
  if (order != 2 && order != 4 && order != 8)
    throw std::invalid_argument("bayer matrix order must be 2, 4 or 8");

  Image<int> b(2, 2);
  b << 0, 2, 3, 1;
  for (int n = 2; n < order; n *= 2) {
    Image<int> next(2 * n, 2 * n);
    next.topLeftCorner(n, n) = 4 * b;
    next.topRightCorner(n, n) = 4 * b + 2;
    next.bottomLeftCorner(n, n) = 4 * b + 3;
    next.bottomRightCorner(n, n) = 4 * b + 1;
    b.swap(next);
  }
  return b;
}

GrayImage dither_ordered(const GrayImage& img, int order) {
  const Image<int> bayer = bayer_matrix(order);
  const double cells = static_cast<double>(order) * order;

  GrayImage out(img.rows(), img.cols());
  for (Eigen::Index i = 0; i < img.rows(); ++i) {
    for (Eigen::Index j = 0; j < img.cols(); ++j) {
      const double threshold =
          255.0 * (bayer(i % order, j % order) + 0.5) / cells;
      out(i, j) = img(i, j) > threshold ? 255 : 0;
    }
  }
  return out;
}

GrayImage dither(const GrayImage& img, const DitherMethod& method) {
  switch (method.kind) {
    case DitherMethod::Kind::ordered:
      return dither_ordered(img, method.order);
    case DitherMethod::Kind::floyd_steinberg:
    default:
      return dither_floyd_steinberg(img);
  }
}

bool is_bilevel(const GrayImage& img) {
  return ((img == 0) || (img == 255)).all();
}

}  // namespace undither
