#include "undither/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace undither {

void PipelineConfig::validate() const {
  box.validate();
  diffusion.validate();
  if (d < 1) throw std::invalid_argument("glcm displacement must be >= 1");
  if (stride < 1) throw std::invalid_argument("metrics stride must be >= 1");

  const bool wants_fixed =
      snapshot == SnapshotPolicy::fixed_step ||
      (snapshot == SnapshotPolicy::all && fixed_step >= 0);
  if (snapshot == SnapshotPolicy::fixed_step && fixed_step < 0)
    throw std::invalid_argument("fixed-step snapshot needs a step index");
  if (wants_fixed && fixed_step > diffusion.iterations)
    throw std::invalid_argument("snapshot step exceeds iteration count");
}

MetricsRow compute_metrics_row(int step, const GrayImage& img,
                               const GrayImage* reference,
                               GlcmDirection theta, int d) {
  MetricsRow row;
  row.step = step;
  row.first = first_order(histogram(img));
  row.second = second_order(glcm(img, theta, d));
  if (reference) row.fid = fidelity(*reference, img);
  return row;
}

UnditherResult run_undither(const GrayImage& input, const GrayImage* reference,
                            const PipelineConfig& config) {
  config.validate();
  if (reference && !same_size(input, *reference))
    throw std::invalid_argument("reference image size differs from input");
  if (config.snapshot == SnapshotPolicy::best_mse && !reference)
    throw std::invalid_argument("best-mse snapshot requires a reference");

  const int iterations = config.diffusion.iterations;
  const bool want_best = (config.snapshot == SnapshotPolicy::best_mse ||
                          config.snapshot == SnapshotPolicy::all) &&
                         reference != nullptr;
  const bool want_fixed = (config.snapshot == SnapshotPolicy::fixed_step ||
                           config.snapshot == SnapshotPolicy::all) &&
                          config.fixed_step >= 0;
  const bool want_final = config.snapshot == SnapshotPolicy::final_only ||
                          config.snapshot == SnapshotPolicy::all;

  UnditherResult result;

  if (reference)
    result.rows.push_back(compute_metrics_row(-1, *reference, reference,
                                              config.theta, config.d));

  const FloatImage filtered = box_filter(to_float(input), config.box);

  GrayImage best_image;
  GrayImage fixed_image;
  GrayImage final_image;

  const auto measure = [&](int step, const GrayImage& gray) {
    result.rows.push_back(
        compute_metrics_row(step, gray, reference, config.theta, config.d));
    if (want_best && result.rows.back().fid) {
      const double mse = result.rows.back().fid->mse;
      if (!result.best_mse || mse < *result.best_mse) {  // earliest argmin
        result.best_mse = mse;
        result.best_mse_step = step;
        best_image = gray;
      }
    }
  };

  const GrayImage gray0 = to_gray(filtered);
  measure(0, gray0);
  if (want_fixed && config.fixed_step == 0) fixed_image = gray0;
  if (iterations == 0) final_image = gray0;

  const auto observer = [&](int step, const FloatImage& f) {
    const bool metrics_due = step % config.stride == 0 || step == iterations;
    const bool fixed_due = want_fixed && step == config.fixed_step;
    if (!metrics_due && !fixed_due && step != iterations) return;

    const GrayImage gray = to_gray(f);
    if (metrics_due) measure(step, gray);
    if (fixed_due) fixed_image = gray;
    if (step == iterations) final_image = gray;
  };

  result.final_image =
      diffuse(filtered, config.diffusion, observer, &result.diagnostics);

  if (want_best)
    result.snapshots.emplace_back("best", std::move(best_image));
  if (want_fixed)
    result.snapshots.emplace_back("step_" + std::to_string(config.fixed_step),
                                  std::move(fixed_image));
  if (want_final)
    result.snapshots.emplace_back("final", std::move(final_image));

  return result;
}

const char* const kMetricsCsvHeader =
    "step,mean,variance,mu3_paper,mu4,energy1,entropy1,energy2,entropy2,"
    "contrast,homogeneity,correlation,mse,psnr";

std::string format_csv_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

void append_row(std::ostream& out, const MetricsRow& row) {
  out << row.step;
  out << ',' << format_csv_value(row.first.mean);
  out << ',' << format_csv_value(row.first.variance);
  out << ',' << format_csv_value(row.first.mu3);
  out << ',' << format_csv_value(row.first.mu4);
  out << ',' << format_csv_value(row.first.energy);
  out << ',' << format_csv_value(row.first.entropy);
  out << ',' << format_csv_value(row.second.energy);
  out << ',' << format_csv_value(row.second.entropy);
  out << ',' << format_csv_value(row.second.contrast);
  out << ',' << format_csv_value(row.second.homogeneity);
  out << ','
      << (row.second.correlation ? format_csv_value(*row.second.correlation)
                                 : "nan");
  out << ',' << (row.fid ? format_csv_value(row.fid->mse) : "");
  out << ',' << (row.fid ? format_csv_value(row.fid->psnr) : "");
  out << '\n';
}

}  // namespace

void write_metrics_csv(std::ostream& out,
                       const std::vector<MetricsRow>& rows) {
  out << kMetricsCsvHeader << '\n';
  for (const MetricsRow& row : rows) append_row(out, row);
}

void write_summary(std::ostream& out, const UnditherResult& result) {
  if (result.best_mse_step) {
    out << "best_mse_step=" << *result.best_mse_step << '\n';
    out << "best_mse=" << format_csv_value(*result.best_mse) << '\n';
  } else {
    out << "best_mse_step=none\n";
  }

  const MetricsRow& last = result.rows.back();
  out << "final_step=" << last.step << '\n';
  out << "final_mean=" << format_csv_value(last.first.mean) << '\n';
  out << "final_variance=" << format_csv_value(last.first.variance) << '\n';
  out << "final_mu3_paper=" << format_csv_value(last.first.mu3) << '\n';
  out << "final_mu4=" << format_csv_value(last.first.mu4) << '\n';
  out << "final_energy1=" << format_csv_value(last.first.energy) << '\n';
  out << "final_entropy1=" << format_csv_value(last.first.entropy) << '\n';
  out << "final_energy2=" << format_csv_value(last.second.energy) << '\n';
  out << "final_entropy2=" << format_csv_value(last.second.entropy) << '\n';
  out << "final_contrast=" << format_csv_value(last.second.contrast) << '\n';
  out << "final_homogeneity=" << format_csv_value(last.second.homogeneity)
      << '\n';
  out << "final_correlation="
      << (last.second.correlation ? format_csv_value(*last.second.correlation)
                                  : "nan")
      << '\n';
  if (last.fid) {
    out << "final_mse=" << format_csv_value(last.fid->mse) << '\n';
    out << "final_psnr=" << format_csv_value(last.fid->psnr) << '\n';
  }
}

}  // namespace undither
