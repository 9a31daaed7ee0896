// Command-line front end.  Subcommands produce the library's standard data
// files (closed-form family sweeps, mixture studies, Kerr trajectories, and
// one-shot state quantifiers) as CSV or JSON, and run the validation suite.
// Output is deterministic: identical invocations produce identical bytes.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../src/internal_util.hpp"
#include "rough/dynamics.hpp"
#include "rough/phasespace.hpp"
#include "rough/roughness.hpp"
#include "rough/specfun.hpp"
#include "rough/states.hpp"
#include "rough/validate.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rough;
using rough::detail::format_g12;

constexpr const char* kVersion = "1.0.0";

// Columnar result of one subcommand run, plus the metadata echoed into the
// output header so every file records the parameters that produced it.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  ordered_json meta;  // flat key -> number/string map, insertion-ordered
};

std::string meta_to_line(const std::string& family, const ordered_json& meta) {
  std::ostringstream os;
  os << "# family=" << family;
  for (const auto& [key, value] : meta.items()) {
    os << ' ' << key << '=';
    if (value.is_string()) {
      os << value.get<std::string>();
    } else if (value.is_number_float()) {
      os << format_g12(value.get<double>());
    } else {
      os << value.dump();
    }
  }
  os << " version=" << kVersion;
  return os.str();
}

std::string table_to_csv(const std::string& family, const Table& table) {
  std::ostringstream os;
  os << meta_to_line(family, table.meta) << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << format_g12(row[c]);
    os << '\n';
  }
  return os.str();
}

std::string table_to_json(const std::string& family, const Table& table) {
  ordered_json j;
  j["family"] = family;
  j["metadata"] = table.meta;
  j["metadata"]["version"] = kVersion;
  ordered_json cols;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    ordered_json values = ordered_json::array();
    for (const auto& row : table.rows) values.push_back(row[c]);
    cols[table.columns[c]] = std::move(values);
  }
  j["columns"] = std::move(cols);
  return j.dump() + "\n";
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);
  os << text;
  if (!os) throw std::runtime_error("write failed: " + out_path);
}

std::vector<double> linspace(double from, double to, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  if (from > to) throw std::invalid_argument("range start exceeds stop");
  std::vector<double> values(static_cast<std::size_t>(count));
  if (count == 1) {
    values[0] = from;
    return values;
  }
  for (int i = 0; i < count; ++i)
    values[static_cast<std::size_t>(i)] = from + (to - from) * i / (count - 1);
  values.back() = to;
  return values;
}

// Integer-valued sweep axis (fock n, diagonal m).  count = 0 walks every
// integer in [from, to]; an explicit count must land on distinct integers.
std::vector<int> integer_axis(double from, double to, int count) {
  const auto lo = static_cast<int>(std::llround(from));
  const auto hi = static_cast<int>(std::llround(to));
  if (std::fabs(from - lo) > 1e-9 || std::fabs(to - hi) > 1e-9)
    throw std::invalid_argument("this family sweeps an integer parameter");
  if (lo < 0) throw std::invalid_argument("parameter must be non-negative");
  if (lo > hi) throw std::invalid_argument("range start exceeds stop");
  std::vector<int> values;
  if (count == 0) {
    for (int n = lo; n <= hi; ++n) values.push_back(n);
    return values;
  }
  for (double v : linspace(from, to, count)) {
    const auto n = static_cast<int>(std::llround(v));
    if (std::fabs(v - n) > 1e-9)
      throw std::invalid_argument("count does not divide the integer range");
    if (!values.empty() && n == values.back())
      throw std::invalid_argument("count denser than the integer range");
    values.push_back(n);
  }
  return values;
}

double thermal_entropy(double nbar) {
  if (nbar <= 0.0) return 0.0;
  return (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar);
}

// Shared flag block: every data-producing subcommand carries the same
// range/grid/output vocabulary, validated here once.
struct SweepOptions {
  std::string family;
  double from = 0.0;
  double to = 0.0;
  int count = 0;  // 0 = family default
  std::vector<double> betas;
  std::vector<int> m_values;
  std::vector<double> z_values;  // explicit z list overrides from/to/count
  double alpha_re = 2.0;
  double alpha_im = 0.0;
  double omega = 0.0;
  double lambda = 1.0;
  int dim = 64;
  double grid_extent = 0.0;  // 0 = family default
  int grid_points = 0;       // 0 = family default (256)
  std::string format = "csv";
  std::string out;
  bool from_set = false;
  bool to_set = false;
};

void add_common_flags(CLI::App* cmd, SweepOptions& opt, bool with_range) {
  if (with_range) {
    cmd->add_option("--from", opt.from, "sweep range start")
        ->trigger_on_parse()
        ->each([&opt](const std::string&) { opt.from_set = true; });
    cmd->add_option("--to", opt.to, "sweep range stop")
        ->trigger_on_parse()
        ->each([&opt](const std::string&) { opt.to_set = true; });
    cmd->add_option("--count", opt.count,
                    "number of sweep points (0 = family default)");
  }
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.out, "output path (default: stdout)");
}

void add_grid_flags(CLI::App* cmd, SweepOptions& opt) {
  cmd->add_option("--dim", opt.dim, "Fock-basis truncation dimension")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--grid-extent", opt.grid_extent,
                  "phase-space grid half-width (0 = automatic)");
  cmd->add_option("--grid-points", opt.grid_points,
                  "grid points per axis, even and >= 8 (0 = 256)");
}

PhaseSpaceGrid make_grid(const SweepOptions& opt, double default_extent) {
  const double extent = opt.grid_extent > 0.0 ? opt.grid_extent : default_extent;
  const int points = opt.grid_points > 0 ? opt.grid_points : 256;
  return PhaseSpaceGrid(-extent, extent, -extent, extent, points, points);
}

// Defaulted sweep range per family; explicit --from/--to override.
void apply_range_default(SweepOptions& opt, double from, double to) {
  if (!opt.from_set) opt.from = from;
  if (!opt.to_set) opt.to = to;
}

double single(const std::vector<double>& values, double fallback,
              const char* what) {
  if (values.empty()) return fallback;
  if (values.size() > 1)
    throw std::invalid_argument(std::string(what) + " accepts a single value here");
  return values.front();
}

int single(const std::vector<int>& values, int fallback, const char* what) {
  if (values.empty()) return fallback;
  if (values.size() > 1)
    throw std::invalid_argument(std::string(what) + " accepts a single value here");
  return values.front();
}

Table sweep_fock(SweepOptions& opt) {
  apply_range_default(opt, 0, 50);
  Table t;
  t.columns = {"n", "r2_q2", "r2_wq", "R"};
  for (int n : integer_axis(opt.from, opt.to, opt.count)) {
    const RoughnessBreakdown b = roughness_fock(n);
    t.rows.push_back({static_cast<double>(n), b.r2_q2, b.r2_wq, b.r});
  }
  return t;
}

Table sweep_squeezed(SweepOptions& opt) {
  apply_range_default(opt, 0.0, 4.0);
  Table t;
  t.columns = {"zeta", "R"};
  for (double z : linspace(opt.from, opt.to, opt.count ? opt.count : 101))
    t.rows.push_back({z, roughness_squeezed(z)});
  return t;
}

Table sweep_cat(SweepOptions& opt, CatParity parity) {
  apply_range_default(opt, parity == CatParity::even ? 0.0 : 0.05, 6.0);
  Table t;
  t.columns = {"q0", "R"};
  for (double q0 : linspace(opt.from, opt.to, opt.count ? opt.count : 120))
    t.rows.push_back({q0, roughness_cat(q0, parity)});
  return t;
}

Table sweep_thermal(SweepOptions& opt) {
  apply_range_default(opt, 0.0, 10.0);
  Table t;
  t.columns = {"nbar", "R"};
  for (double nbar : linspace(opt.from, opt.to, opt.count ? opt.count : 101))
    t.rows.push_back({nbar, roughness_thermal(nbar)});
  return t;
}

// Uniform diagonal state versus the thermal state of equal mean occupation:
// roughness of both, plus the entropies whose ordering separates them.
Table sweep_diagonal(SweepOptions& opt) {
  apply_range_default(opt, 0, 20);
  const std::vector<int> ms = integer_axis(opt.from, opt.to, opt.count);
  const int needed = ms.back() + 1;
  const int cache_dim = std::max(opt.dim, needed);
  const IntegralTensorCache cache = build_tensor_cache(cache_dim);
  Table t;
  t.meta["dim"] = cache_dim;
  t.columns = {"m", "nbar", "R_diag", "R_thermal", "S_diag", "S_thermal", "delta"};
  for (int m : ms) {
    const double nbar = 0.5 * m;
    const FockDensityMatrix rho = make_diagonal(m, m + 1);
    t.rows.push_back({static_cast<double>(m), nbar, roughness_general(rho, cache).r,
                      roughness_thermal(nbar), entropy_diagonal(rho),
                      thermal_entropy(nbar), linear_entropy(rho)});
  }
  return t;
}

std::vector<double> z_axis(const SweepOptions& opt) {
  if (!opt.z_values.empty()) {
    for (double z : opt.z_values)
      if (z < 0.0 || z > 1.0) throw std::invalid_argument("--z must lie in [0, 1]");
    return opt.z_values;
  }
  return linspace(opt.from, opt.to, opt.count ? opt.count : 101);
}

// Thermal/number-state mixture swept in the pure-state fraction z; the
// quantifier columns are normalized against the pure z = 1 endpoint.
Table sweep_mixture(SweepOptions& opt) {
  apply_range_default(opt, 0.0, 1.0);
  const double beta = single(opt.betas, 10.0, "--beta");
  const int M = single(opt.m_values, 10, "--M");
  const IntegralTensorCache cache = build_tensor_cache(opt.dim);
  const PhaseSpaceGrid grid = make_grid(opt, 20.0);
  const FockDensityMatrix ref = make_fock(M, opt.dim);
  const double r_ref = roughness_general(ref, cache).r;
  const double n_ref = negativity(wigner_field(ref, grid));
  Table t;
  t.meta["beta"] = beta;
  t.meta["M"] = M;
  t.meta["dim"] = opt.dim;
  t.meta["grid_extent"] = grid.q_max;
  t.meta["grid_points"] = grid.nq;
  t.columns = {"z", "R", "N", "relR", "relN", "S", "F"};
  for (double z : z_axis(opt)) {
    const FockDensityMatrix rho = make_mixture({beta, M, z}, opt.dim);
    const double r = roughness_general(rho, cache).r;
    const double n = negativity(wigner_field(rho, grid));
    t.rows.push_back({z, r, n, r / r_ref, n / n_ref, entropy_diagonal(rho),
                      fidelity(ref, rho)});
  }
  return t;
}

// Differences between the hot- and cold-bath mixtures at equal z, plus the
// fidelity of the hot mixture against the purer cold one.
Table run_mixture_diff(SweepOptions& opt) {
  apply_range_default(opt, 0.0, 1.0);
  if (opt.betas.size() > 2)
    throw std::invalid_argument("--beta takes at most two values (hot, cold)");
  const double beta_hot = opt.betas.empty() ? 0.4 : opt.betas[0];
  const double beta_cold = opt.betas.size() < 2 ? 10.0 : opt.betas[1];
  const int M = single(opt.m_values, 10, "--M");
  const IntegralTensorCache cache = build_tensor_cache(opt.dim);
  const PhaseSpaceGrid grid = make_grid(opt, 20.0);
  Table t;
  t.meta["beta_hot"] = beta_hot;
  t.meta["beta_cold"] = beta_cold;
  t.meta["M"] = M;
  t.meta["dim"] = opt.dim;
  t.meta["grid_extent"] = grid.q_max;
  t.meta["grid_points"] = grid.nq;
  t.columns = {"z", "dR", "dN", "one_minus_F"};
  for (double z : z_axis(opt)) {
    const FockDensityMatrix hot = make_mixture({beta_hot, M, z}, opt.dim);
    const FockDensityMatrix cold = make_mixture({beta_cold, M, z}, opt.dim);
    const double dr = roughness_general(hot, cache).r - roughness_general(cold, cache).r;
    const double dn =
        negativity(wigner_field(hot, grid)) - negativity(wigner_field(cold, grid));
    t.rows.push_back({z, dr, dn, 1.0 - fidelity(cold, hot)});
  }
  return t;
}

Table run_dynamics(SweepOptions& opt) {
  apply_range_default(opt, 0.0, 1.2);
  const complexd alpha(opt.alpha_re, opt.alpha_im);
  const KerrParams params{opt.omega, opt.lambda};
  const double auto_extent =
      std::max(6.0, 2.0 * (std::sqrt(2.0) * std::abs(alpha) + 5.0));
  const PhaseSpaceGrid grid = make_grid(opt, auto_extent);
  const int dim = opt.dim > 0 ? opt.dim : suggested_dim_coherent(alpha);
  const std::vector<double> times =
      linspace(opt.from, opt.to, opt.count ? opt.count : 101);
  const std::vector<TrajectoryRecord> records =
      trajectory(alpha, params, times, grid, dim);
  Table t;
  t.meta["alpha_re"] = opt.alpha_re;
  t.meta["alpha_im"] = opt.alpha_im;
  t.meta["omega"] = opt.omega;
  t.meta["lambda"] = opt.lambda;
  t.meta["dim"] = dim;
  t.meta["grid_extent"] = grid.q_max;
  t.meta["grid_points"] = grid.nq;
  t.columns = {"t", "R", "D"};
  for (const TrajectoryRecord& rec : records)
    t.rows.push_back({rec.t, rec.roughness, rec.ddm});
  return t;
}

// Diagonal entropy of the mixture across the z grid for every requested
// (M, beta) pair; zmax repeats the per-pair argmax so the maximizer curve
// can be read from the same file.
Table sweep_entropy_surface(SweepOptions& opt) {
  apply_range_default(opt, 0.0, 1.0);
  const std::vector<double> betas =
      opt.betas.empty() ? std::vector<double>{0.4, 10.0} : opt.betas;
  const std::vector<int> ms =
      opt.m_values.empty() ? std::vector<int>{10} : opt.m_values;
  const std::vector<double> zs =
      !opt.z_values.empty() ? z_axis(opt)
                            : linspace(opt.from, opt.to, opt.count ? opt.count : 201);
  Table t;
  t.columns = {"M", "beta", "z", "S", "zmax"};
  for (int M : ms) {
    for (double beta : betas) {
      const double nbar = nbar_from_beta(beta);
      const int dim = std::max({M + 1, suggested_dim_thermal(nbar), 16});
      const FockDensityMatrix th = make_thermal(nbar, dim);
      const FockDensityMatrix fk = make_fock(M, dim);
      const double zmax = zmax_scan(beta, M, zs, dim);
      for (double z : zs) {
        t.rows.push_back({static_cast<double>(M), beta, z,
                          entropy_diagonal(mix(th, fk, z)), zmax});
      }
    }
  }
  return t;
}

Table run_sweep(SweepOptions& opt) {
  if (opt.family == "fock") return sweep_fock(opt);
  if (opt.family == "squeezed") return sweep_squeezed(opt);
  if (opt.family == "cat-even") return sweep_cat(opt, CatParity::even);
  if (opt.family == "cat-odd") return sweep_cat(opt, CatParity::odd);
  if (opt.family == "thermal") return sweep_thermal(opt);
  if (opt.family == "diagonal") return sweep_diagonal(opt);
  if (opt.family == "mixture") return sweep_mixture(opt);
  if (opt.family == "dynamics") return run_dynamics(opt);
  if (opt.family == "entropy-surface") return sweep_entropy_surface(opt);
  throw std::invalid_argument("unknown family: " + opt.family);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open state file: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// One-shot quantifiers for a density matrix supplied as JSON.  S is the
// diagonal entropy and reads nan for states with coherences; F compares
// against the --ref-file state, normalized by the reference purity.
Table run_state_quantifiers(SweepOptions& opt, const std::string& state_path,
                            const std::string& ref_path) {
  const FockDensityMatrix rho = state_from_json_string(read_file(state_path));
  const IntegralTensorCache cache = build_tensor_cache(rho.dim());
  PhaseSpaceGrid grid = auto_grid_for(rho);
  if (opt.grid_extent > 0.0 || opt.grid_points > 0) {
    grid = make_grid(opt, grid.q_max);
  }
  Table t;
  t.meta["state"] = state_path;
  if (!ref_path.empty()) t.meta["ref"] = ref_path;
  t.meta["dim"] = rho.dim();
  t.meta["grid_extent"] = grid.q_max;
  t.meta["grid_points"] = grid.nq;
  t.columns = {"R", "N", "delta", "S", "F"};
  double entropy = std::nan("");
  if (rho.max_offdiagonal() < 1e-10) entropy = entropy_diagonal(rho);
  double fid = std::nan("");
  if (!ref_path.empty()) {
    const FockDensityMatrix ref = state_from_json_string(read_file(ref_path));
    fid = fidelity(ref, rho);
  }
  t.rows.push_back({roughness_general(rho, cache).r,
                    negativity(wigner_field(rho, grid)), linear_entropy(rho),
                    entropy, fid});
  return t;
}

int run_validate_command(const std::string& level_name) {
  const ValidateLevel level =
      level_name == "full" ? ValidateLevel::full : ValidateLevel::quick;
  const ValidationReport report = run_validate(level);
  std::cout << format_validation_report(report);
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space roughness toolkit: closed-form family sweeps, "
               "mixture studies, Kerr-oscillator trajectories, and the "
               "self-check suite"};
  app.require_subcommand(1);

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "tabulate quantifiers of a state family over a parameter range");
  sweep
      ->add_option("--family", sweep_opt.family,
                   "fock | squeezed | cat-even | cat-odd | thermal | diagonal | "
                   "mixture | dynamics | entropy-surface")
      ->required();
  add_common_flags(sweep, sweep_opt, true);
  add_grid_flags(sweep, sweep_opt);
  sweep->add_option("--beta", sweep_opt.betas,
                    "bath inverse temperature (repeatable for entropy-surface)");
  sweep->add_option("--M", sweep_opt.m_values,
                    "number-state index of the pure component (repeatable for "
                    "entropy-surface)");
  sweep->add_option("--z", sweep_opt.z_values,
                    "explicit pure-state fractions (overrides --from/--to/--count)");
  sweep->add_option("--alpha-re", sweep_opt.alpha_re, "initial coherent amplitude, real part");
  sweep->add_option("--alpha-im", sweep_opt.alpha_im, "initial coherent amplitude, imaginary part");
  sweep->add_option("--omega", sweep_opt.omega, "harmonic frequency");
  sweep->add_option("--lambda", sweep_opt.lambda, "Kerr nonlinearity (> 0)");

  SweepOptions diff_opt;
  CLI::App* diff = app.add_subcommand(
      "mixture-diff",
      "hot-minus-cold quantifier differences of the thermal/number mixture");
  add_common_flags(diff, diff_opt, true);
  add_grid_flags(diff, diff_opt);
  diff->add_option("--beta", diff_opt.betas,
                   "bath inverse temperatures: hot then cold (default 0.4 10)");
  diff->add_option("--M", diff_opt.m_values, "number-state index of the pure component");
  diff->add_option("--z", diff_opt.z_values,
                   "explicit pure-state fractions (overrides --from/--to/--count)");

  SweepOptions dyn_opt;
  CLI::App* dyn = app.add_subcommand(
      "dynamics", "Kerr-oscillator roughness and classical-distance trajectory");
  add_common_flags(dyn, dyn_opt, true);
  dyn_opt.dim = 0;  // default: truncation policy for the initial state
  dyn->add_option("--dim", dyn_opt.dim, "Fock-basis truncation (0 = automatic)");
  dyn->add_option("--grid-extent", dyn_opt.grid_extent,
                  "phase-space grid half-width (0 = automatic)");
  dyn->add_option("--grid-points", dyn_opt.grid_points,
                  "grid points per axis, even and >= 8 (0 = 256)");
  dyn->add_option("--alpha-re", dyn_opt.alpha_re, "initial coherent amplitude, real part");
  dyn->add_option("--alpha-im", dyn_opt.alpha_im, "initial coherent amplitude, imaginary part");
  dyn->add_option("--omega", dyn_opt.omega, "harmonic frequency");
  dyn->add_option("--lambda", dyn_opt.lambda, "Kerr nonlinearity (> 0)");

  std::string level = "quick";
  CLI::App* validate = app.add_subcommand(
      "validate", "run the oracle cross-check suite and print a pass/fail table");
  validate->add_option("level", level, "quick | full")
      ->check(CLI::IsMember({"quick", "full"}));

  SweepOptions quant_opt;
  std::string state_path;
  std::string ref_path;
  CLI::App* quant = app.add_subcommand(
      "state-quantifiers", "R, N, delta, S (and F against a reference) for one state");
  quant->add_option("--state-file", state_path, "density matrix as JSON")->required();
  quant->add_option("--ref-file", ref_path, "reference density matrix as JSON");
  add_common_flags(quant, quant_opt, false);
  quant->add_option("--grid-extent", quant_opt.grid_extent,
                    "phase-space grid half-width (0 = automatic)");
  quant->add_option("--grid-points", quant_opt.grid_points,
                    "grid points per axis, even and >= 8 (0 = 256)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return run_validate_command(level);
    if (sweep->parsed()) {
      const Table t = run_sweep(sweep_opt);
      write_output(sweep_opt.format == "json" ? table_to_json(sweep_opt.family, t)
                                              : table_to_csv(sweep_opt.family, t),
                   sweep_opt.out);
      return 0;
    }
    if (diff->parsed()) {
      const Table t = run_mixture_diff(diff_opt);
      write_output(diff_opt.format == "json" ? table_to_json("mixture-diff", t)
                                             : table_to_csv("mixture-diff", t),
                   diff_opt.out);
      return 0;
    }
    if (dyn->parsed()) {
      dyn_opt.family = "dynamics";
      const Table t = run_dynamics(dyn_opt);
      write_output(dyn_opt.format == "json" ? table_to_json("dynamics", t)
                                            : table_to_csv("dynamics", t),
                   dyn_opt.out);
      return 0;
    }
    if (quant->parsed()) {
      const Table t = run_state_quantifiers(quant_opt, state_path, ref_path);
      write_output(quant_opt.format == "json"
                       ? table_to_json("state-quantifiers", t)
                       : table_to_csv("state-quantifiers", t),
                   quant_opt.out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
