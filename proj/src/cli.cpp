#include "diagent/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "diagent/entropy.hpp"
#include "diagent/error.hpp"
#include "diagent/io.hpp"
#include "diagent/oracle.hpp"
#include "diagent/phase_scan.hpp"

namespace diagent::cli {

namespace {

enum class Format { Csv, Structured, Svg };

struct RunConfig {
  std::string subcommand;
  double gamma = 1.0;
  double lambda = 1.0;
  std::vector<double> gammas;
  double lambda_min = 0.0;
  double lambda_max = 1.5;
  int steps = 151;
  std::optional<int> L_max;
  int L_min = 1;
  int block = 4;
  int ring = 14;
  double quad_tol = 1e-12;
  std::optional<int> threads;
  std::string output;
  Format format = Format::Csv;
  double search_min = 0.0;
  double search_max = 0.995;
  int coarse_steps = 100;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int thread_count(const RunConfig& cfg) {
  if (cfg.threads) return *cfg.threads;
  if (const char* env = std::getenv("DIAGENT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw UsageError("DIAGENT_THREADS must be a positive integer, got '" +
                       std::string(env) + "'");
    return static_cast<int>(v);
  }
  return resolve_threads(0);
}

void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.output.empty())
    out << content;
  else
    io::write_atomic(cfg.output, content);
}

void require_format(const RunConfig& cfg, std::initializer_list<Format> allowed) {
  for (Format f : allowed)
    if (f == cfg.format) return;
  throw UsageError("--format not supported by '" + cfg.subcommand + "'");
}

ScanOptions scan_options(const RunConfig& cfg, int default_lmax) {
  ScanOptions opts;
  opts.L_min = cfg.L_min;
  opts.L_max = cfg.L_max.value_or(default_lmax);
  opts.quad_tol = cfg.quad_tol;
  opts.threads = thread_count(cfg);
  if (opts.L_max - opts.L_min + 1 < 4)
    throw UsageError("fit range needs at least 4 block sizes (--lmin..--lmax)");
  return opts;
}

void report_failures(std::span<const SweepResult> results, std::ostream& err) {
  for (const auto& r : results)
    for (const auto& f : r.failures) err << "warning: point failed: " << f << '\n';
}

std::string context(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "gamma=" << cfg.gamma << ", lambda=" << cfg.lambda;
  if (cfg.L_max) os << ", L=" << *cfg.L_max;
  return os.str();
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& cmd = cfg.subcommand;
  if (cmd == "gtable") {
    require_format(cfg, {Format::Csv});
    const ModelParams p(cfg.gamma, cfg.lambda, cfg.quad_tol);
    emit(cfg, io::gtable_csv(build_table(p, cfg.L_max.value_or(18))), out);
  } else if (cmd == "probs") {
    require_format(cfg, {Format::Csv});
    const ModelParams p(cfg.gamma, cfg.lambda, cfg.quad_tol);
    const auto table = build_table(p, std::max(1, cfg.block - 1));
    emit(cfg, io::probs_csv(diag_distribution(table, cfg.block)), out);
  } else if (cmd == "entropy" || cmd == "fit") {
    const int lmax = cfg.L_max.value_or(18);
    if (lmax - cfg.L_min + 1 < 4 && (cmd == "fit" || cfg.format == Format::Svg))
      throw UsageError("fit range needs at least 4 block sizes (--lmin..--lmax)");
    const ModelParams p(cfg.gamma, cfg.lambda, cfg.quad_tol);
    CurveOptions copts;
    copts.with_entanglement = cmd == "entropy";
    const auto curve = entropy_curve(p, lmax, copts);
    if (cmd == "entropy") {
      require_format(cfg, {Format::Csv, Format::Svg});
      if (cfg.format == Format::Csv) {
        emit(cfg, io::entropy_csv(curve), out);
        return 0;
      }
    } else {
      require_format(cfg, {Format::Csv, Format::Structured, Format::Svg});
    }
    const auto fit = fit_scaling(curve.sizes, curve.de, {cfg.L_min, lmax});
    if (cfg.format == Format::Svg)
      emit(cfg, io::entropy_svg(curve, fit), out);
    else if (cfg.format == Format::Structured)
      emit(cfg, io::fit_structured(cfg.gamma, cfg.lambda, fit), out);
    else
      emit(cfg, io::fit_csv(cfg.gamma, cfg.lambda, fit), out);
  } else if (cmd == "sweep" || cmd == "ising") {
    require_format(cfg, {Format::Csv, Format::Svg});
    const double gamma = cmd == "ising" ? 1.0 : cfg.gamma;
    const auto r = sweep(gamma, cfg.lambda_min, cfg.lambda_max, cfg.steps,
                         scan_options(cfg, 14));
    report_failures(std::span(&r, 1), err);
    emit(cfg, cfg.format == Format::Svg ? io::sweep_svg(std::span(&r, 1))
                                        : io::sweep_csv(r),
         out);
  } else if (cmd == "grid") {
    require_format(cfg, {Format::Csv, Format::Svg});
    const std::vector<double> gammas =
        cfg.gammas.empty() ? std::vector<double>{0.0, 0.2, 0.5, 0.7, 1.0}
                           : cfg.gammas;
    const auto rs = grid_scan(gammas, cfg.lambda_min, cfg.lambda_max, cfg.steps,
                              scan_options(cfg, 14));
    report_failures(rs, err);
    emit(cfg, cfg.format == Format::Svg ? io::sweep_svg(rs) : io::grid_csv(rs),
         out);
  } else if (cmd == "boundary") {
    require_format(cfg, {Format::Csv, Format::Svg});
    const std::vector<double> gammas =
        cfg.gammas.empty() ? std::vector<double>{0.2, 0.5, 0.7} : cfg.gammas;
    BoundaryOptions bopts;
    bopts.scan = scan_options(cfg, 12);
    bopts.lo = cfg.search_min;
    bopts.hi = cfg.search_max;
    bopts.coarse_steps = cfg.coarse_steps;
    std::vector<BoundaryPoint> points;
    for (double g : gammas) {
      try {
        points.push_back(find_boundary(g, bopts));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoSignChange) throw;
        err << "warning: " << e.what() << '\n';
      }
    }
    if (points.empty() && cfg.format == Format::Svg)
      throw Error(ErrorKind::NoSignChange, "no boundary point found to plot");
    emit(cfg, cfg.format == Format::Svg ? io::boundary_svg(points)
                                        : io::boundary_csv(points),
         out);
  } else if (cmd == "oracle") {
    require_format(cfg, {Format::Csv});
    const oracle::FiniteChainSpec spec{cfg.ring, cfg.gamma, cfg.lambda};
    const auto ed = oracle::ed_ground_state(spec, cfg.block);
    const auto table =
        build_table(ModelParams(cfg.gamma, cfg.lambda, cfg.quad_tol),
                    std::max(1, cfg.block - 1));
    const auto dist = diag_distribution(table, cfg.block);
    io::CsvTable csv({"bitstring", "ed", "infinite_chain", "difference"});
    for (std::uint32_t s = 0; s < ed.block_probabilities.size(); ++s)
      csv.row({io::bitstring(s, cfg.block),
               io::format_double(ed.block_probabilities[s]),
               io::format_double(dist[s]),
               io::format_double(dist[s] - ed.block_probabilities[s])});
    emit(cfg, csv.str(), out);
  } else {
    throw UsageError("no subcommand given");
  }
  return 0;
}

void add_model_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--gamma", cfg.gamma, "anisotropy gamma")
      ->check(CLI::Range(-1e6, 1e6));
  sub->add_option("--lambda", cfg.lambda, "transverse field lambda")
      ->check(CLI::Range(-1e6, 1e6));
}

void add_common_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--quad-tol", cfg.quad_tol, "absolute quadrature tolerance")
      ->check(CLI::Range(1e-15, 1e-3));
  sub->add_option("-o,--output", cfg.output, "output path (default: stdout)");
  sub->add_option("--format", cfg.format, "csv | structured | svg")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"csv", Format::Csv},
                                        {"structured", Format::Structured},
                                        {"svg", Format::Svg}},
          CLI::ignore_case));
}

void add_lmax(CLI::App* sub, RunConfig& cfg, const std::string& help) {
  sub->add_option("--lmax", cfg.L_max, help)->check(CLI::Range(1, 20));
}

void add_sweep_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--lambda-min", cfg.lambda_min, "start of the lambda grid");
  sub->add_option("--lambda-max", cfg.lambda_max, "end of the lambda grid");
  sub->add_option("--steps", cfg.steps, "number of grid points")
      ->check(CLI::Range(8, 100000));
  sub->add_option("--lmin", cfg.L_min, "smallest block in the fit")
      ->check(CLI::Range(1, 20));
  sub->add_option("--threads", cfg.threads, "worker threads (env DIAGENT_THREADS)")
      ->check(CLI::Range(1, 1024));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Diagonal entropy of the infinite XY chain", "diagent"};
  app.require_subcommand(1);

  auto* gtable = app.add_subcommand("gtable", "correlation kernel g_l for |l| <= lmax");
  add_model_flags(gtable, cfg);
  add_common_flags(gtable, cfg);
  add_lmax(gtable, cfg, "largest |l| (default 18)");

  auto* probs = app.add_subcommand("probs", "sigma^z outcome probabilities of a block");
  add_model_flags(probs, cfg);
  add_common_flags(probs, cfg);
  probs->add_option("--block", cfg.block, "block size L")->check(CLI::Range(1, 20));

  auto* entropy = app.add_subcommand("entropy", "DE, EE and coherence for L = 1..lmax");
  add_model_flags(entropy, cfg);
  add_common_flags(entropy, cfg);
  add_lmax(entropy, cfg, "largest block (default 18)");
  entropy->add_option("--lmin", cfg.L_min, "smallest block in the SVG fit")
      ->check(CLI::Range(1, 20));

  auto* fit = app.add_subcommand("fit", "fit DE(L) = aL + b log2 L + c");
  add_model_flags(fit, cfg);
  add_common_flags(fit, cfg);
  add_lmax(fit, cfg, "largest block (default 18)");
  fit->add_option("--lmin", cfg.L_min, "smallest block in the fit")
      ->check(CLI::Range(1, 20));

  auto* sweep_cmd = app.add_subcommand("sweep", "coefficients along a lambda grid");
  sweep_cmd->add_option("--gamma", cfg.gamma, "anisotropy gamma");
  add_common_flags(sweep_cmd, cfg);
  add_sweep_flags(sweep_cmd, cfg);
  add_lmax(sweep_cmd, cfg, "largest block (default 14)");

  auto* ising = app.add_subcommand("ising", "sweep of the transverse-field Ising chain");
  add_common_flags(ising, cfg);
  add_sweep_flags(ising, cfg);
  add_lmax(ising, cfg, "largest block (default 14)");

  auto* grid = app.add_subcommand("grid", "sweeps for several gamma values");
  grid->add_option("--gammas", cfg.gammas, "gamma values (default 0 0.2 0.5 0.7 1)")
      ->delimiter(',');
  add_common_flags(grid, cfg);
  add_sweep_flags(grid, cfg);
  add_lmax(grid, cfg, "largest block (default 14)");

  auto* boundary = app.add_subcommand("boundary", "zero of c(lambda) per gamma");
  boundary->add_option("--gammas", cfg.gammas, "gamma values (default 0.2 0.5 0.7)")
      ->delimiter(',')
      ->check(CLI::Range(1e-12, 1.0));
  add_common_flags(boundary, cfg);
  add_lmax(boundary, cfg, "largest block (default 12)");
  boundary->add_option("--lmin", cfg.L_min, "smallest block in the fit")
      ->check(CLI::Range(1, 20));
  boundary->add_option("--search-min", cfg.search_min, "lower end of the search");
  boundary->add_option("--search-max", cfg.search_max, "upper end of the search");
  boundary->add_option("--coarse-steps", cfg.coarse_steps, "coarse grid points")
      ->check(CLI::Range(3, 100000));
  boundary->add_option("--threads", cfg.threads, "worker threads (env DIAGENT_THREADS)")
      ->check(CLI::Range(1, 1024));

  auto* oracle_cmd = app.add_subcommand("oracle", "");
  oracle_cmd->group("");  // hidden debugging aid
  add_model_flags(oracle_cmd, cfg);
  add_common_flags(oracle_cmd, cfg);
  oracle_cmd->add_option("--ring", cfg.ring, "ring length N")->check(CLI::Range(2, 16));
  oracle_cmd->add_option("--block", cfg.block, "block size L")->check(CLI::Range(1, 8));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg_out, msg_err;
    const int code = app.exit(e, msg_out, msg_err);
    out << msg_out.str();
    err << msg_err.str();
    if (code == 0) return 0;
    err << app.help();
    return 2;
  }
  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    return dispatch(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << " at " << context(cfg);
    if (e.index()) err << " (index " << *e.index() << ")";
    err << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace diagent::cli
