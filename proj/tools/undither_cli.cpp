#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "undither/pgm.hpp"
#include "undither/pipeline.hpp"

namespace fs = std::filesystem;
using namespace undither;

namespace {

// exit codes: 0 ok, 1 usage, 2 I/O or format, 3 numerical
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNumerical = 3;

GlcmDirection parse_theta(int degrees) {
  switch (degrees) {
    case 0: return GlcmDirection::deg0;
    case 45: return GlcmDirection::deg45;
    case 90: return GlcmDirection::deg90;
    case 135: return GlcmDirection::deg135;
    default:
      throw std::invalid_argument("theta must be 0, 45, 90 or 135");
  }
}

// "best" | "step:K" | "final" | "all"
void parse_snapshot(const std::string& text, PipelineConfig& config) {
  if (text == "best") {
    config.snapshot = SnapshotPolicy::best_mse;
  } else if (text == "final") {
    config.snapshot = SnapshotPolicy::final_only;
  } else if (text == "all") {
    config.snapshot = SnapshotPolicy::all;
  } else if (text.rfind("step:", 0) == 0) {
    config.snapshot = SnapshotPolicy::fixed_step;
    try {
      config.fixed_step = std::stoi(text.substr(5));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad snapshot step in '" + text + "'");
    }
    if (config.fixed_step < 0)
      throw std::invalid_argument("snapshot step must be >= 0");
  } else {
    throw std::invalid_argument("snapshot policy must be best, step:K, final or all");
  }
}

DitherMethod parse_method(const std::string& name, int order) {
  if (name == "fs") return DitherMethod::floyd_steinberg();
  if (name == "ordered") return DitherMethod::ordered(order);
  throw std::invalid_argument("dither method must be fs or ordered");
}

struct UnditherArgs {
  std::string input;
  std::string reference;
  std::string out_dir = ".";
  std::string snapshot = "best";
  std::string config_path;
  int theta = 0;
  bool force = false;
  PipelineConfig config;
};

// option handles, for "was this flag given on the command line"
struct UnditherOptions {
  CLI::Option* reference = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* window = nullptr;
  CLI::Option* passes = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* epsilon = nullptr;
  CLI::Option* dt = nullptr;
  CLI::Option* iterations = nullptr;
  CLI::Option* theta = nullptr;
  CLI::Option* d = nullptr;
  CLI::Option* stride = nullptr;
  CLI::Option* snapshot = nullptr;
  CLI::Option* force = nullptr;
};

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return text.substr(begin, text.find_last_not_of(" \t\r") - begin + 1);
}

// plain key=value file ('#' starts a comment); keys mirror the flag names.
// A key is ignored when the same flag was passed on the command line, so
// precedence is flags > config file > defaults.
void apply_config_file(UnditherArgs& args, const UnditherOptions& given) {
  std::ifstream in(args.config_path);
  if (!in)
    throw std::ios_base::failure("cannot open config '" + args.config_path +
                                 "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    const auto parse_int = [&](const char* what) {
      try {
        return std::stoi(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": bad " + what + " '" + value + "'");
      }
    };
    const auto parse_real = [&](const char* what) {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": bad " + what + " '" + value + "'");
      }
    };

    if (key == "reference") {
      if (!given.reference->count()) args.reference = value;
    } else if (key == "out") {
      if (!given.out->count()) args.out_dir = value;
    } else if (key == "window") {
      if (!given.window->count()) args.config.box.window = parse_int("window");
    } else if (key == "passes") {
      if (!given.passes->count()) args.config.box.passes = parse_int("passes");
    } else if (key == "p") {
      if (!given.p->count()) args.config.diffusion.p = parse_real("p");
    } else if (key == "epsilon") {
      if (!given.epsilon->count())
        args.config.diffusion.epsilon = parse_real("epsilon");
    } else if (key == "dt") {
      if (!given.dt->count()) args.config.diffusion.dt = parse_real("dt");
    } else if (key == "iterations") {
      if (!given.iterations->count())
        args.config.diffusion.iterations = parse_int("iterations");
    } else if (key == "theta") {
      if (!given.theta->count()) args.theta = parse_int("theta");
    } else if (key == "d") {
      if (!given.d->count()) args.config.d = parse_int("d");
    } else if (key == "stride") {
      if (!given.stride->count()) args.config.stride = parse_int("stride");
    } else if (key == "snapshot") {
      if (!given.snapshot->count()) args.snapshot = value;
    } else if (key == "force") {
      if (!given.force->count()) {
        if (value == "true" || value == "1")
          args.force = true;
        else if (value == "false" || value == "0")
          args.force = false;
        else
          throw std::invalid_argument("config line " + std::to_string(lineno) +
                                      ": bad force '" + value + "'");
      }
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
  }
}

int cmd_dither(const std::string& input, const std::string& output,
               const std::string& method, int order) {
  const GrayImage img = read_pgm_file(input);
  write_pgm_file(output, dither(img, parse_method(method, order)));
  return 0;
}

int cmd_undither(UnditherArgs& args) {
  args.config.theta = parse_theta(args.theta);
  parse_snapshot(args.snapshot, args.config);

  const GrayImage input = read_pgm_file(args.input);
  if (!is_bilevel(input) && !args.force)
    throw std::invalid_argument(
        "input is not bilevel; pass --force to undither it anyway");

  std::optional<GrayImage> reference;
  if (!args.reference.empty()) reference = read_pgm_file(args.reference);

  if (!reference) {
    // best-MSE needs the original; fall back to what is still computable
    if (args.config.snapshot == SnapshotPolicy::best_mse) {
      std::cerr << "warning: no --reference; writing final snapshot instead "
                   "of best-MSE\n";
      args.config.snapshot = SnapshotPolicy::final_only;
    } else if (args.config.snapshot == SnapshotPolicy::all) {
      std::cerr << "warning: no --reference; best-MSE snapshot skipped\n";
    }
  }

  const UnditherResult result =
      run_undither(input, reference ? &*reference : nullptr, args.config);

  fs::create_directories(args.out_dir);
  const fs::path out(args.out_dir);

  {
    std::ofstream csv(out / "metrics.csv", std::ios::binary);
    if (!csv) throw std::ios_base::failure("cannot write metrics.csv");
    write_metrics_csv(csv, result.rows);
  }
  {
    std::ofstream summary(out / "summary.txt", std::ios::binary);
    if (!summary) throw std::ios_base::failure("cannot write summary.txt");
    write_summary(summary, result);
  }
  for (const auto& [name, image] : result.snapshots)
    write_pgm_file(out / (name + ".pgm"), image);

  if (result.diagnostics.range_violations > 0)
    std::cerr << "warning: max principle violated on "
              << result.diagnostics.range_violations << " steps\n";

  std::cout << "rows=" << result.rows.size();
  if (result.best_mse_step)
    std::cout << " best_mse_step=" << *result.best_mse_step
              << " best_mse=" << format_csv_value(*result.best_mse);
  std::cout << " max_step_change="
            << format_csv_value(result.diagnostics.max_change) << "\n";
  return 0;
}

int cmd_metrics(const std::string& path_a, const std::string& path_b,
                int theta_degrees, int d) {
  const GrayImage a = read_pgm_file(path_a);
  std::optional<GrayImage> b;
  if (!path_b.empty()) b = read_pgm_file(path_b);

  const MetricsRow row = compute_metrics_row(
      0, a, b ? &*b : nullptr, parse_theta(theta_degrees), d);
  write_metrics_csv(std::cout, {row});
  return 0;
}

int cmd_histogram(const std::string& input) {
  const Histogram h = histogram(read_pgm_file(input));
  for (int level = 0; level < Histogram::levels; ++level)
    std::cout << level << ',' << h.counts[static_cast<std::size_t>(level)]
              << '\n';
  return 0;
}

int cmd_profile(const std::string& input, int row) {
  const GrayImage img = read_pgm_file(input);
  if (row < 0 || row >= img.rows())
    throw std::invalid_argument("row " + std::to_string(row) +
                                " out of range (height " +
                                std::to_string(img.rows()) + ")");
  for (Eigen::Index j = 0; j < img.cols(); ++j)
    std::cout << j << ',' << static_cast<int>(img(row, j)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Reconstructs 8-bit grayscale images from 1-bit dithered ones "
      "(box filtering + anisotropic diffusion) and evaluates every "
      "diffusion step with histogram, co-occurrence and fidelity metrics."};
  app.require_subcommand(1);

  // dither
  std::string dither_input, dither_output, dither_method = "fs";
  int dither_order = 4;
  CLI::App* dither_cmd =
      app.add_subcommand("dither", "Dither an 8-bit PGM down to black/white");
  dither_cmd->add_option("input", dither_input, "source PGM")->required();
  dither_cmd->add_option("output", dither_output, "destination PGM")
      ->required();
  dither_cmd->add_option("--method", dither_method, "fs|ordered")
      ->check(CLI::IsMember({"fs", "ordered"}));
  dither_cmd->add_option("--order", dither_order, "Bayer matrix order")
      ->check(CLI::IsMember({2, 4, 8}));

  // undither
  UnditherArgs u;
  UnditherOptions u_opts;
  CLI::App* undither_cmd = app.add_subcommand(
      "undither", "Reconstruct a gray image from a dithered PGM");
  undither_cmd->add_option("input", u.input, "dithered (bilevel) PGM")
      ->required();
  u_opts.reference =
      undither_cmd->add_option("--reference", u.reference,
                               "original image, enables MSE/PSNR and best-MSE");
  u_opts.out = undither_cmd->add_option("--out", u.out_dir,
                                        "output directory");
  u_opts.window = undither_cmd->add_option("--window", u.config.box.window,
                                           "box filter window (odd, >= 3)");
  u_opts.passes = undither_cmd->add_option("--passes", u.config.box.passes,
                                           "box filter passes");
  u_opts.p = undither_cmd->add_option("--p", u.config.diffusion.p,
                                      "gradient exponent");
  u_opts.epsilon = undither_cmd->add_option(
      "--epsilon", u.config.diffusion.epsilon, "diffusivity regularizer");
  u_opts.dt =
      undither_cmd->add_option("--dt", u.config.diffusion.dt, "time step");
  u_opts.iterations = undither_cmd->add_option(
      "--iterations", u.config.diffusion.iterations, "diffusion steps");
  u_opts.theta =
      undither_cmd->add_option("--theta", u.theta, "GLCM direction in degrees")
          ->check(CLI::IsMember({0, 45, 90, 135}));
  u_opts.d = undither_cmd->add_option("--d", u.config.d, "GLCM displacement");
  u_opts.stride = undither_cmd->add_option("--stride", u.config.stride,
                                           "compute metrics every N steps");
  u_opts.snapshot = undither_cmd->add_option("--snapshot", u.snapshot,
                                             "best | step:K | final | all");
  u_opts.force =
      undither_cmd->add_flag("--force", u.force, "accept non-bilevel input");
  undither_cmd->add_option("--config", u.config_path,
                           "key=value file; command-line flags win");

  // metrics
  std::string metrics_a, metrics_b;
  int metrics_theta = 0, metrics_d = 1;
  CLI::App* metrics_cmd = app.add_subcommand(
      "metrics", "Print the metrics row for an image (vs an optional second)");
  metrics_cmd->add_option("image-a", metrics_a, "PGM to measure")->required();
  metrics_cmd->add_option("image-b", metrics_b, "reference PGM");
  metrics_cmd->add_option("--theta", metrics_theta, "GLCM direction")
      ->check(CLI::IsMember({0, 45, 90, 135}));
  metrics_cmd->add_option("--d", metrics_d, "GLCM displacement");

  // histogram
  std::string hist_input;
  CLI::App* hist_cmd =
      app.add_subcommand("histogram", "Print level,count for all 256 levels");
  hist_cmd->add_option("input", hist_input, "PGM")->required();

  // profile
  std::string profile_input;
  int profile_row = 0;
  CLI::App* profile_cmd =
      app.add_subcommand("profile", "Print col,value along one image row");
  profile_cmd->add_option("input", profile_input, "PGM")->required();
  profile_cmd->add_option("row", profile_row, "row index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*dither_cmd)
      return cmd_dither(dither_input, dither_output, dither_method,
                        dither_order);
    if (*undither_cmd) {
      if (!u.config_path.empty()) apply_config_file(u, u_opts);
      return cmd_undither(u);
    }
    if (*metrics_cmd)
      return cmd_metrics(metrics_a, metrics_b, metrics_theta, metrics_d);
    if (*hist_cmd) return cmd_histogram(hist_input);
    if (*profile_cmd) return cmd_profile(profile_input, profile_row);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const CodecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
