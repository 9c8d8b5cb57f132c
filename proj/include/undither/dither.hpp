#pragma once

#include "undither/image.hpp"

namespace undither {

struct DitherMethod {
  enum class Kind { floyd_steinberg, ordered };

  Kind kind = Kind::floyd_steinberg;
  int order = 4;  // Bayer matrix order, only meaningful for `ordered`

  static DitherMethod floyd_steinberg() {
    return {Kind::floyd_steinberg, 0};
  }
  static DitherMethod ordered(int order) {
    return {Kind::ordered, order};
  }
};

// Classic error diffusion: raster scan (left to right, top to bottom),
// threshold at 128 with ties quantizing up, error pushed to the four
// unvisited neighbors with weights 7/16, 3/16, 5/16, 1/16. Shares that
// fall outside the image are dropped.
GrayImage dither_floyd_steinberg(const GrayImage& img);

// Bayer index matrix of order n in {2, 4, 8}; B2 = [[0,2],[3,1]] and
// B_{2n} = [[4B, 4B+2], [4B+3, 4B+1]].
Image<int> bayer_matrix(int order);

// Pixel goes white iff img(i,j) > 255 * (B(i mod n, j mod n) + 0.5) / n^2.
// Throws std::invalid_argument for orders outside {2, 4, 8}.
GrayImage dither_ordered(const GrayImage& img, int order);

GrayImage dither(const GrayImage& img, const DitherMethod& method);

// True iff every pixel is 0 or 255.
bool is_bilevel(const GrayImage& img);

}  // namespace undither
