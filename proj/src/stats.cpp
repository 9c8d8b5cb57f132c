#include "undither/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace undither {

FirstOrderStats first_order(const Histogram& hist) {
  if (hist.total <= 0)
    throw std::invalid_argument("first_order: empty histogram");

  FirstOrderStats s;
  for (int k = 0; k < Histogram::levels; ++k) {
    if (hist.counts[static_cast<std::size_t>(k)] == 0) continue;
    s.mean += k * hist.probability(k);
  }
  for (int k = 0; k < Histogram::levels; ++k) {
    if (hist.counts[static_cast<std::size_t>(k)] == 0) continue;
    const double p = hist.probability(k);
    const double d = s.mean - k;  // paper ordering, flips the sign of mu3
    s.variance += d * d * p;
    s.mu3 += d * d * d * p;
    s.mu4 += d * d * d * d * p;
    s.energy += p * p;
    s.entropy -= p * std::log2(p);
  }
  return s;
}

std::pair<int, int> direction_offset(GlcmDirection theta) {
  switch (theta) {
    case GlcmDirection::deg0:
      return {0, 1};
    case GlcmDirection::deg45:
      return {-1, 1};
    case GlcmDirection::deg90:
      return {-1, 0};
    case GlcmDirection::deg135:
      return {-1, -1};
  }
  throw std::invalid_argument("glcm: unknown direction");
}

Glcm glcm(const GrayImage& img, GlcmDirection theta, int d) {
  if (d < 1) throw std::invalid_argument("glcm: displacement must be >= 1");

  const auto [dr, dc] = direction_offset(theta);
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();

  Glcm m;
  m.theta = theta;
  m.d = d;
  m.p = Eigen::MatrixXd::Zero(Glcm::levels, Glcm::levels);

  std::int64_t pairs = 0;
  for (Eigen::Index i = 0; i < h; ++i) {
    const Eigen::Index i2 = i + static_cast<Eigen::Index>(dr) * d;
    if (i2 < 0 || i2 >= h) continue;
    for (Eigen::Index j = 0; j < w; ++j) {
      const Eigen::Index j2 = j + static_cast<Eigen::Index>(dc) * d;
      if (j2 < 0 || j2 >= w) continue;
      m.p(img(i, j), img(i2, j2)) += 1.0;
      ++pairs;
    }
  }
  if (pairs == 0)
    throw std::invalid_argument(
        "glcm: no valid pixel pair at this displacement");

  m.p /= static_cast<double>(pairs);
  return m;
}

SecondOrderStats second_order(const Glcm& m) {
  SecondOrderStats s;
  for (int a = 0; a < Glcm::levels; ++a) {
    for (int b = 0; b < Glcm::levels; ++b) {
      const double p = m.p(a, b);
      if (p == 0.0) continue;
      s.energy += p * p;
      s.entropy -= p * std::log2(p);
      s.contrast += static_cast<double>(a - b) * (a - b) * p;
      s.homogeneity += p / (1.0 + std::abs(a - b));
    }
  }

  // Haralick marginals: mu_x over rows, mu_y over columns.
  const Eigen::VectorXd px = m.p.rowwise().sum();
  const Eigen::VectorXd py = m.p.colwise().sum();
  const Eigen::VectorXd levels =
      Eigen::VectorXd::LinSpaced(Glcm::levels, 0.0, Glcm::levels - 1.0);

  const double mu_x = levels.dot(px);
  const double mu_y = levels.dot(py);
  const double var_x = (levels.array() - mu_x).square().matrix().dot(px);
  const double var_y = (levels.array() - mu_y).square().matrix().dot(py);
  const double sigma = std::sqrt(var_x) * std::sqrt(var_y);

  if (sigma > 0.0) {
    const Eigen::VectorXd u = (levels.array() - mu_x).matrix();
    const Eigen::VectorXd v = (levels.array() - mu_y).matrix();
    s.correlation = u.dot(m.p * v) / sigma;
  }
  return s;
}

FidelityMetrics fidelity(const GrayImage& original,
                         const GrayImage& reconstructed) {
  if (!same_size(original, reconstructed))
    throw std::invalid_argument("fidelity: images differ in size");

  const double mse =
      (original.cast<double>() - reconstructed.cast<double>())
          .square()
          .sum() /
      static_cast<double>(original.size());

  FidelityMetrics f;
  f.mse = mse;
  f.psnr = mse > 0.0 ? 20.0 * std::log10(255.0 / std::sqrt(mse))
                     : std::numeric_limits<double>::infinity();
  return f;
}

}  // namespace undither
