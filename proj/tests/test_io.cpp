#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "diagent/error.hpp"
#include "diagent/io.hpp"

using namespace diagent;
namespace fs = std::filesystem;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    const std::string s = io::format_double(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("bitstring puts site 1 first") {
  CHECK(io::bitstring(0b001, 3) == "100");
  CHECK(io::bitstring(0b110, 3) == "011");
  CHECK(io::bitstring(0, 2) == "00");
}

TEST_CASE("CSV headers") {
  const ModelParams p(0.5, 0.7);
  const auto table = build_table(p, 5);
  CHECK(first_line(io::gtable_csv(table)) == "l,g_l");
  const auto dist = diag_distribution(table, 3);
  const auto probs = io::probs_csv(dist);
  CHECK(first_line(probs) == "bitstring,probability");
  CHECK(std::count(probs.begin(), probs.end(), '\n') == 9);
  const auto curve = entropy_curve(p, 6);
  CHECK(first_line(io::entropy_csv(curve)) == "L,DE_bits,EE_bits,C_bits");
  const auto fit = fit_scaling(curve.sizes, curve.de, {1, 6});
  CHECK(first_line(io::fit_csv(0.5, 0.7, fit)) ==
        "gamma,lambda,a,b,c,rms,L_min,L_max");
  const auto structured = nlohmann::json::parse(io::fit_structured(0.5, 0.7, fit));
  CHECK(structured.at("a").get<double>() == fit.a);
  CHECK(structured.at("rms").get<double>() == fit.rms_residual);
  CHECK(structured.at("L_max").get<int>() == 6);
}

TEST_CASE("CsvTable layout") {
  io::CsvTable t({"x", "y"});
  t.row({"1", "2"}).row({"3", "4"});
  CHECK(t.str() == "x,y\n1,2\n3,4\n");
}

TEST_CASE("write_atomic") {
  const fs::path dir = fs::temp_directory_path() / "diagent_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path target = dir / "out.csv";
  io::write_atomic(target, "a\n");
  io::write_atomic(target, "b,c\n");
  CHECK(slurp(target) == "b,c\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  try {
    io::write_atomic(dir / "missing" / "out.csv", "x");
    FAIL("expected Io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  fs::remove_all(dir);
}

TEST_CASE("SVG output is deterministic") {
  const ModelParams p(1.0, 1.0);
  const auto curve = entropy_curve(p, 8);
  const auto fit = fit_scaling(curve.sizes, curve.de, {1, 8});
  const auto a = io::entropy_svg(curve, fit);
  const auto b = io::entropy_svg(entropy_curve(p, 8), fit);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);

  ScanOptions opts;
  opts.L_max = 6;
  opts.threads = 1;
  const auto s1 = sweep(1.0, 0.8, 1.2, 9, opts);
  opts.threads = 3;
  const auto s2 = sweep(1.0, 0.8, 1.2, 9, opts);
  CHECK(io::sweep_svg({&s1, 1}) == io::sweep_svg({&s2, 1}));

  const BoundaryPoint pts[] = {{0.6, 0.8, 0.79, 0.81, 0.0, RootKind::Touching}};
  const auto bsvg = io::boundary_svg(pts);
  CHECK(bsvg == io::boundary_svg(pts));
  CHECK(first_line(io::boundary_csv(pts)) == "gamma,lambda_star,residual_c");
}
