#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "undither/boxfilter.hpp"
#include "undither/diffusion.hpp"
#include "undither/dither.hpp"
#include "undither/stats.hpp"

namespace undither {

enum class SnapshotPolicy { best_mse, fixed_step, final_only, all };

// Defaults run the reference experiment: Floyd-Steinberg input, two 3x3
// box-filter passes, then 200 diffusion steps with p = 1, epsilon = 0.001,
// dt = 0.1, metrics at every step for theta = 0 degrees, d = 1.
struct PipelineConfig {
  DitherMethod method = DitherMethod::floyd_steinberg();
  BoxFilterSpec box{3, 2};
  DiffusionParams diffusion{1.0, 0.001, 0.1, 200};
  SnapshotPolicy snapshot = SnapshotPolicy::best_mse;
  int fixed_step = -1;  // required >= 0 when snapshot involves fixed_step
  GlcmDirection theta = GlcmDirection::deg0;
  int d = 1;
  int stride = 1;  // compute metrics every `stride` steps

  void validate() const;
};

// One line of metrics.csv. step -1 is the reference (original) row, step 0
// the post-box-filter image, steps >= 1 the diffusion iterates. Fidelity
// is empty when no reference image was supplied.
struct MetricsRow {
  int step = 0;
  FirstOrderStats first;
  SecondOrderStats second;
  std::optional<FidelityMetrics> fid;
};

MetricsRow compute_metrics_row(int step, const GrayImage& img,
                               const GrayImage* reference,
                               GlcmDirection theta, int d);

struct UnditherResult {
  std::vector<MetricsRow> rows;
  // name -> quantized image, in emission order ("best", "step_<k>", "final")
  std::vector<std::pair<std::string, GrayImage>> snapshots;
  std::optional<int> best_mse_step;  // earliest argmin over steps >= 0
  std::optional<double> best_mse;
  FloatImage final_image;
  RunDiagnostics diagnostics;
};

// Box-filters the (already dithered) input, diffuses it, and measures
// every observed iterate after quantization via to_gray. `reference` is
// the original image before dithering and may be null; best-MSE snapshots
// need it. Throws std::invalid_argument on config/dimension errors and
// NumericalError if the diffusion produces non-finite values.
UnditherResult run_undither(const GrayImage& input, const GrayImage* reference,
                            const PipelineConfig& config);

// Fixed column order; floats with 9 significant digits, "inf"/"nan"
// literals, empty cells for absent fidelity values.
extern const char* const kMetricsCsvHeader;

std::string format_csv_value(double v);
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_summary(std::ostream& out, const UnditherResult& result);

}  // namespace undither
