#pragma once

#include <Eigen/Dense>

#include <optional>

#include "undither/image.hpp"

namespace undither {

// First-order (histogram) features. The third and fourth moments are the
// raw central moments; the third uses the (mean - r_k)^3 ordering, whose
// sign is opposite to the conventional skewness numerator. Entropy is in
// bits (log base 2, 0*log 0 = 0).
struct FirstOrderStats {
  double mean = 0.0;
  double variance = 0.0;
  double mu3 = 0.0;  // (mean - r_k)^3 ordering
  double mu4 = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
};

// Throws std::invalid_argument on an empty histogram.
FirstOrderStats first_order(const Histogram& hist);

enum class GlcmDirection { deg0, deg45, deg90, deg135 };

// (row, col) offset of the second pixel of a pair: deg0 is rightward,
// deg90 upward, deg45 / deg135 the up-right / up-left diagonals.
std::pair<int, int> direction_offset(GlcmDirection theta);

// Joint probability of ordered gray-level pairs at displacement d along
// theta; not symmetrized. Always 256 x 256.
struct Glcm {
  static constexpr int levels = 256;

  Eigen::MatrixXd p;  // p(a, b), rows indexed by the first pixel's level
  GlcmDirection theta = GlcmDirection::deg0;
  int d = 1;
};

// Throws std::invalid_argument when d < 1 or the image admits no pair at
// the requested displacement.
Glcm glcm(const GrayImage& img, GlcmDirection theta, int d);

// Second-order (co-occurrence) features; entropy in bits. `correlation`
// is empty when either marginal deviation is zero (the remaining fields
// are still meaningful).
struct SecondOrderStats {
  double energy = 0.0;
  double entropy = 0.0;
  double contrast = 0.0;
  double homogeneity = 0.0;
  std::optional<double> correlation;
};

SecondOrderStats second_order(const Glcm& m);

struct FidelityMetrics {
  double mse = 0.0;
  double psnr = 0.0;  // 20*log10(255/sqrt(mse)); +inf when mse == 0
};

// Throws std::invalid_argument on dimension mismatch.
FidelityMetrics fidelity(const GrayImage& original,
                         const GrayImage& reconstructed);

}  // namespace undither
