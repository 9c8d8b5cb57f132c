// Drives the installed binary end to end through a shell, checking exit
// codes and emitted files.
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "undither/dither.hpp"
#include "undither/pgm.hpp"
#include "undither/pipeline.hpp"

using namespace undither;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CliResult run_cli(const fs::path& dir, const std::string& args) {
  const fs::path out_file = dir / "_stdout.txt";
  const fs::path err_file = dir / "_stderr.txt";
  const std::string cmd = std::string(UNDITHER_CLI_PATH) + " " + args + " >" +
                          out_file.string() + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::current_path() / "cli_work" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

GrayImage gradient_image(int h, int w) {
  GrayImage img(h, w);
  for (Eigen::Index i = 0; i < h; ++i)
    for (Eigen::Index j = 0; j < w; ++j)
      img(i, j) = static_cast<std::uint8_t>((i * 255) / (h - 1));
  return img;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> csv_cells(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("dither subcommand writes a bilevel image") {
  const fs::path dir = fresh_dir("dither");
  write_pgm_file(dir / "in.pgm", gradient_image(24, 24));

  const CliResult r = run_cli(
      dir, "dither " + (dir / "in.pgm").string() + " " +
               (dir / "out.pgm").string());
  CHECK(r.code == 0);
  const GrayImage out = read_pgm_file(dir / "out.pgm");
  CHECK(is_bilevel(out));
  CHECK(out.rows() == 24);

  const CliResult r2 = run_cli(
      dir, "dither " + (dir / "in.pgm").string() + " " +
               (dir / "ord.pgm").string() + " --method ordered --order 8");
  CHECK(r2.code == 0);
  CHECK(is_bilevel(read_pgm_file(dir / "ord.pgm")));

  // dithering an already bilevel image is the identity for fs
  const CliResult r3 = run_cli(
      dir, "dither " + (dir / "out.pgm").string() + " " +
               (dir / "again.pgm").string());
  CHECK(r3.code == 0);
  CHECK((read_pgm_file(dir / "again.pgm") == out).all());
}

TEST_CASE("dither error paths") {
  const fs::path dir = fresh_dir("dither_err");
  const CliResult missing = run_cli(
      dir, "dither " + (dir / "nope.pgm").string() + " " +
               (dir / "out.pgm").string());
  CHECK(missing.code == 2);
  CHECK(!fs::exists(dir / "out.pgm"));

  std::ofstream(dir / "junk.pgm") << "not a pgm at all";
  const CliResult junk = run_cli(
      dir, "dither " + (dir / "junk.pgm").string() + " " +
               (dir / "out.pgm").string());
  CHECK(junk.code == 2);

  const CliResult usage = run_cli(dir, "dither");
  CHECK(usage.code == 1);
}

TEST_CASE("undither produces metrics, summary and snapshots") {
  const fs::path dir = fresh_dir("undither");
  const GrayImage original = gradient_image(16, 16);
  write_pgm_file(dir / "orig.pgm", original);
  write_pgm_file(dir / "dith.pgm", dither_floyd_steinberg(original));

  const CliResult r = run_cli(
      dir, "undither " + (dir / "dith.pgm").string() + " --reference " +
               (dir / "orig.pgm").string() + " --out " +
               (dir / "res").string() + " --iterations 6");
  CHECK(r.code == 0);

  const auto rows = lines_of(slurp(dir / "res" / "metrics.csv"));
  REQUIRE(rows.size() == 9);  // header + ref + step0 + 6 steps
  CHECK(rows[0] == kMetricsCsvHeader);
  CHECK(csv_cells(rows[1])[0] == "-1");
  CHECK(csv_cells(rows[8])[0] == "6");

  const std::string summary = slurp(dir / "res" / "summary.txt");
  CHECK(summary.find("best_mse_step=") != std::string::npos);
  CHECK(fs::exists(dir / "res" / "best.pgm"));
  CHECK(r.out.find("best_mse_step=") != std::string::npos);
}

TEST_CASE("undither rejects gray input unless forced") {
  const fs::path dir = fresh_dir("undither_force");
  write_pgm_file(dir / "gray.pgm", gradient_image(12, 12));

  const CliResult refuse = run_cli(
      dir, "undither " + (dir / "gray.pgm").string() + " --out " +
               (dir / "res").string() + " --iterations 2");
  CHECK(refuse.code == 1);
  CHECK(refuse.err.find("--force") != std::string::npos);

  const CliResult forced = run_cli(
      dir, "undither " + (dir / "gray.pgm").string() + " --out " +
               (dir / "res").string() + " --iterations 2 --force");
  CHECK(forced.code == 0);
}

TEST_CASE("undither without reference leaves fidelity cells empty") {
  const fs::path dir = fresh_dir("undither_noref");
  write_pgm_file(dir / "dith.pgm",
                 dither_floyd_steinberg(gradient_image(12, 12)));

  const CliResult r = run_cli(
      dir, "undither " + (dir / "dith.pgm").string() + " --out " +
               (dir / "res").string() + " --iterations 3");
  CHECK(r.code == 0);
  CHECK(r.err.find("no --reference") != std::string::npos);

  const auto rows = lines_of(slurp(dir / "res" / "metrics.csv"));
  REQUIRE(rows.size() == 5);  // header + step0 + 3 steps (no ref row)
  const auto cells = csv_cells(rows[1]);
  REQUIRE(cells.size() == 14);
  CHECK(cells[0] == "0");
  CHECK(cells[12] == "");
  CHECK(cells[13] == "");

  // best-MSE was downgraded to a final snapshot
  CHECK(fs::exists(dir / "res" / "final.pgm"));
  CHECK(!fs::exists(dir / "res" / "best.pgm"));
}

TEST_CASE("snapshot step selection") {
  const fs::path dir = fresh_dir("undither_snapshot");
  const GrayImage original = gradient_image(10, 10);
  write_pgm_file(dir / "orig.pgm", original);
  write_pgm_file(dir / "dith.pgm", dither_floyd_steinberg(original));

  const std::string base = "undither " + (dir / "dith.pgm").string() +
                           " --reference " + (dir / "orig.pgm").string() +
                           " --iterations 4 --out ";
  CHECK(run_cli(dir, base + (dir / "res").string() + " --snapshot step:3")
            .code == 0);
  CHECK(fs::exists(dir / "res" / "step_3.pgm"));

  CHECK(run_cli(dir, base + (dir / "res2").string() + " --snapshot step:99")
            .code == 1);
  CHECK(run_cli(dir, base + (dir / "res3").string() + " --snapshot bogus")
            .code == 1);

  CHECK(run_cli(dir, base + (dir / "res4").string() + " --snapshot all")
            .code == 0);
  CHECK(fs::exists(dir / "res4" / "best.pgm"));
  CHECK(fs::exists(dir / "res4" / "final.pgm"));
}

TEST_CASE("undither runs are byte-identical") {
  const fs::path dir = fresh_dir("undither_det");
  const GrayImage original = gradient_image(20, 20);
  write_pgm_file(dir / "orig.pgm", original);
  write_pgm_file(dir / "dith.pgm", dither_floyd_steinberg(original));

  const std::string base = "undither " + (dir / "dith.pgm").string() +
                           " --reference " + (dir / "orig.pgm").string() +
                           " --iterations 10 --out ";
  CHECK(run_cli(dir, base + (dir / "a").string()).code == 0);
  CHECK(run_cli(dir, base + (dir / "b").string()).code == 0);
  CHECK(slurp(dir / "a" / "metrics.csv") == slurp(dir / "b" / "metrics.csv"));
  CHECK(slurp(dir / "a" / "best.pgm") == slurp(dir / "b" / "best.pgm"));
  CHECK(slurp(dir / "a" / "summary.txt") == slurp(dir / "b" / "summary.txt"));
}

TEST_CASE("config file values apply under command-line flags") {
  const fs::path dir = fresh_dir("undither_config");
  write_pgm_file(dir / "dith.pgm",
                 dither_floyd_steinberg(gradient_image(10, 10)));
  std::ofstream(dir / "run.cfg") << "iterations=3\nsnapshot=final\n";

  const std::string base = "undither " + (dir / "dith.pgm").string() +
                           " --config " + (dir / "run.cfg").string() +
                           " --out ";
  CHECK(run_cli(dir, base + (dir / "res").string()).code == 0);
  REQUIRE(fs::exists(dir / "res" / "metrics.csv"));
  CHECK(lines_of(slurp(dir / "res" / "metrics.csv")).size() == 5);

  // explicit flag beats the config file
  CHECK(run_cli(dir, base + (dir / "res2").string() + " --iterations 2")
            .code == 0);
  CHECK(lines_of(slurp(dir / "res2" / "metrics.csv")).size() == 4);
}

TEST_CASE("metrics subcommand prints one csv row") {
  const fs::path dir = fresh_dir("metrics");
  write_pgm_file(dir / "const.pgm", GrayImage::Constant(6, 6, 50));

  const CliResult r =
      run_cli(dir, "metrics " + (dir / "const.pgm").string());
  CHECK(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == kMetricsCsvHeader);
  const auto cells = csv_cells(rows[1]);
  CHECK(cells[1] == "50");   // mean
  CHECK(cells[5] == "1");    // energy1
  CHECK(cells[10] == "1");   // homogeneity
  CHECK(cells[11] == "nan"); // correlation undefined on a constant image
  CHECK(cells[12] == "");    // no second image, no mse

  const CliResult same = run_cli(
      dir, "metrics " + (dir / "const.pgm").string() + " " +
               (dir / "const.pgm").string());
  const auto cells2 = csv_cells(lines_of(same.out)[1]);
  CHECK(cells2[12] == "0");
  CHECK(cells2[13] == "inf");

  write_pgm_file(dir / "other.pgm", GrayImage::Constant(6, 7, 50));
  const CliResult mismatch = run_cli(
      dir, "metrics " + (dir / "const.pgm").string() + " " +
               (dir / "other.pgm").string());
  CHECK(mismatch.code == 1);
}

TEST_CASE("histogram subcommand") {
  const fs::path dir = fresh_dir("histogram");
  GrayImage img(1, 2);
  img(0, 0) = 0;
  img(0, 1) = 255;
  write_pgm_file(dir / "in.pgm", img);

  const CliResult r = run_cli(dir, "histogram " + (dir / "in.pgm").string());
  CHECK(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 256);
  CHECK(rows[0] == "0,1");
  CHECK(rows[128] == "128,0");
  CHECK(rows[255] == "255,1");
}

TEST_CASE("profile subcommand") {
  const fs::path dir = fresh_dir("profile");
  GrayImage img(1, 3);
  img(0, 0) = 5;
  img(0, 1) = 6;
  img(0, 2) = 7;
  write_pgm_file(dir / "in.pgm", img);

  const CliResult r = run_cli(dir, "profile " + (dir / "in.pgm").string() + " 0");
  CHECK(r.code == 0);
  CHECK(r.out == "0,5\n1,6\n2,7\n");

  CHECK(run_cli(dir, "profile " + (dir / "in.pgm").string() + " 1").code == 1);
}

TEST_CASE("usage errors exit with code 1") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli(dir, "").code == 1);
  CHECK(run_cli(dir, "frobnicate x").code == 1);
  CHECK(run_cli(dir, "--help").code == 0);
}

}  // TEST_SUITE
