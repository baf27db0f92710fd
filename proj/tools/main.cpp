// latvar: steady-state variance of leader-follower consensus on directed
// 1D/2D/3D lattices. Subcommands compute variance fields by closed form,
// Lyapunov solve or Monte Carlo, cross-validate the three routes, regenerate
// the reference data files, and emit scaling reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latvar/closedform.hpp"
#include "latvar/combinatorics.hpp"
#include "latvar/lattice.hpp"
#include "latvar/lyapunov.hpp"
#include "latvar/scaling.hpp"
#include "latvar/simulate.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitGuard = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json_fmt, tsv_pgf };

struct OutputSpec {
  Format format = Format::csv;
  std::string path = "-";
  int precision = 12;
};

const std::map<std::string, Format> kFormatNames{
    {"csv", Format::csv}, {"json", Format::json_fmt}, {"tsv-pgf", Format::tsv_pgf}};

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

/// Stream to --out PATH, "-" meaning stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (path == "-") {
      os_ = &std::cout;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot open output file: " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (file_.is_open() && !file_) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

/// Column table emitted as csv (comma, header) or tsv-pgf (space-separated,
/// single header row). Cells are preformatted strings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;  // leading '#' metadata lines
  bool headerless = false;
};

void write_table(std::ostream& os, const Table& table, Format format) {
  const char sep = (format == Format::csv) ? ',' : ' ';
  for (const auto& c : table.comments) os << "# " << c << '\n';
  if (!table.headerless) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
      if (i) os << sep;
      os << table.header[i];
    }
    os << '\n';
  }
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << sep;
      os << row[i];
    }
    os << '\n';
  }
}

json table_to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& name = table.headerless ? ("c" + std::to_string(i + 1))
                                                 : table.header[i];
      // Values were preformatted; keep them as strings to stay byte-stable.
      r[name] = row[i];
    }
    rows.push_back(std::move(r));
  }
  json out = json::object();
  if (!table.comments.empty()) out["metadata"] = table.comments;
  out["rows"] = std::move(rows);
  return out;
}

void emit_table(const Table& table, const OutputSpec& out) {
  OutputTarget target(out.path);
  if (out.format == Format::json_fmt) {
    target.stream() << table_to_json(table).dump(2) << '\n';
  } else {
    write_table(target.stream(), table, out.format);
  }
  target.finish();
}

void add_output_options(CLI::App* cmd, OutputSpec& out) {
  cmd->add_option("--format", out.format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
  cmd->add_option("--out", out.path, "Output path, - for stdout");
  cmd->add_option("--precision", out.precision, "Significant digits")
      ->check(CLI::Range(2, 17));
}

std::vector<std::string> coordinate_labels(int dimension) {
  switch (dimension) {
    case 1:
      return {"n"};
    case 2:
      return {"n", "m"};
    default:
      return {"n", "m", "l"};
  }
}

void append_coordinates(std::vector<std::string>& row, const latvar::LatticeSpec& spec,
                        long long linear_index) {
  const auto coord = latvar::index_to_coordinate(spec, linear_index);
  for (int a = 0; a < spec.dimension; ++a) {
    row.push_back(std::to_string(coord.index[static_cast<std::size_t>(a)]));
  }
}

// ---------------------------------------------------------------------------
// variance
// ---------------------------------------------------------------------------

struct VarianceOptions {
  int dim = 1;
  long long side = 1;
  std::string method = "closedform";
  bool exact = false;
  OutputSpec out;
  std::string dump_laplacian;
  latvar::SimulationConfig sim = latvar::SimulationConfig::defaults(1);
  bool sim_dt_set = false;
  int threads = 1;
};

int cmd_variance(const VarianceOptions& opt) {
  const latvar::LatticeSpec spec{opt.dim, opt.side};
  spec.validate();

  if (!opt.dump_laplacian.empty()) {
    OutputTarget target(opt.dump_laplacian);
    latvar::build_laplacian(spec).write_triplets(target.stream());
    target.finish();
  }

  Table table;
  table.header = coordinate_labels(spec.dimension);
  table.header.push_back("variance");

  if (opt.exact && opt.method != "closedform") {
    throw std::invalid_argument("--exact is only available with --method closedform");
  }

  if (opt.method == "closedform") {
    if (opt.exact) {
      if (opt.side > latvar::kMaxExactIndex) {
        throw std::length_error("exact mode is guarded to side <= " +
                                std::to_string(latvar::kMaxExactIndex));
      }
      if (spec.state_count() > 4096) {
        throw std::length_error("exact mode is guarded to 4096 states, got " +
                                std::to_string(spec.state_count()));
      }
      for (long long i = 1; i <= spec.state_count(); ++i) {
        std::vector<std::string> row;
        append_coordinates(row, spec, i);
        const auto c = latvar::index_to_coordinate(spec, i);
        latvar::Rational v;
        switch (spec.dimension) {
          case 1:
            v = latvar::variance_1d_exact(static_cast<int>(c.index[0]));
            break;
          case 2:
            v = latvar::variance_2d_exact(static_cast<int>(c.index[0]),
                                          static_cast<int>(c.index[1]));
            break;
          default:
            v = latvar::variance_3d_exact(static_cast<int>(c.index[0]),
                                          static_cast<int>(c.index[1]),
                                          static_cast<int>(c.index[2]));
        }
        row.push_back(v.str());
        table.rows.push_back(std::move(row));
      }
    } else {
      const auto field = latvar::variance_field(spec);
      for (long long i = 1; i <= spec.state_count(); ++i) {
        std::vector<std::string> row;
        append_coordinates(row, spec, i);
        row.push_back(format_double(field.values[static_cast<std::size_t>(i - 1)],
                                    opt.out.precision));
        table.rows.push_back(std::move(row));
      }
    }
  } else if (opt.method == "lyapunov") {
    if (spec.state_count() > latvar::kMaxLyapunovStates) {
      throw std::length_error("state count " + std::to_string(spec.state_count()) +
                              " exceeds the Lyapunov guard of " +
                              std::to_string(latvar::kMaxLyapunovStates) +
                              "; use --method closedform");
    }
    const auto cov = latvar::solve_triangular_lyapunov(latvar::build_laplacian(spec));
    const auto field = latvar::variance_diagonal(cov, spec);
    for (long long i = 1; i <= spec.state_count(); ++i) {
      std::vector<std::string> row;
      append_coordinates(row, spec, i);
      row.push_back(
          format_double(field.values[static_cast<std::size_t>(i - 1)], opt.out.precision));
      table.rows.push_back(std::move(row));
    }
  } else {  // simulate
    const auto est = latvar::simulate_lattice(spec, opt.sim, opt.threads);
    table.header.push_back("std_error");
    for (long long i = 1; i <= spec.state_count(); ++i) {
      std::vector<std::string> row;
      append_coordinates(row, spec, i);
      row.push_back(
          format_double(est.mean.values[static_cast<std::size_t>(i - 1)], opt.out.precision));
      row.push_back(est.std_error_valid
                        ? format_double(est.std_error.values[static_cast<std::size_t>(i - 1)],
                                        opt.out.precision)
                        : std::string("invalid"));
      table.rows.push_back(std::move(row));
    }
    if (!est.std_error_valid) {
      table.comments.push_back("std_error undefined: ensemble < 2");
    }
  }

  emit_table(table, opt.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// crosscheck
// ---------------------------------------------------------------------------

struct CrosscheckOptions {
  int dim = 1;
  long long side = 1;
  double tolerance = 1e-9;
  bool no_simulate = false;
  OutputSpec out;
  latvar::SimulationConfig sim = latvar::SimulationConfig::defaults(1);
  int threads = 1;
};

int cmd_crosscheck(const CrosscheckOptions& opt) {
  const latvar::LatticeSpec spec{opt.dim, opt.side};
  spec.validate();
  if (spec.state_count() > 1000) {
    throw std::length_error("crosscheck requires state count <= 1000 for the Lyapunov leg, got " +
                            std::to_string(spec.state_count()));
  }

  const auto closed = latvar::variance_field(spec);
  const auto cov = latvar::solve_triangular_lyapunov(latvar::build_laplacian(spec));
  const auto lyap = latvar::variance_diagonal(cov, spec);

  double max_dev_cl = 0.0;
  long long worst_cl = 1;
  for (long long i = 0; i < spec.state_count(); ++i) {
    const double d = std::abs(closed.values[static_cast<std::size_t>(i)] -
                              lyap.values[static_cast<std::size_t>(i)]);
    if (d > max_dev_cl) {
      max_dev_cl = d;
      worst_cl = i + 1;
    }
  }

  json report = json::object();
  report["dimension"] = opt.dim;
  report["side"] = opt.side;
  report["tolerance"] = opt.tolerance;
  report["closedform_vs_lyapunov"] = {
      {"max_abs_deviation", max_dev_cl},
      {"worst_index", worst_cl},
      {"pass", max_dev_cl <= opt.tolerance},
  };

  bool ok = max_dev_cl <= opt.tolerance;
  std::string worst_message;
  if (!ok) {
    worst_message = "closedform vs lyapunov deviates by " + format_double(max_dev_cl, 6) +
                    " at linear index " + std::to_string(worst_cl);
  }

  if (!opt.no_simulate) {
    const auto est = latvar::simulate_lattice(spec, opt.sim, opt.threads);
    auto sigma_leg = [&](const latvar::VarianceField& analytic, const char* name) {
      double worst_sigma = 0.0;
      long long worst_at = 1;
      for (long long i = 0; i < spec.state_count(); ++i) {
        const double se = est.std_error.values[static_cast<std::size_t>(i)];
        const double d = std::abs(analytic.values[static_cast<std::size_t>(i)] -
                                  est.mean.values[static_cast<std::size_t>(i)]);
        const double sigmas = d / se;
        if (sigmas > worst_sigma) {
          worst_sigma = sigmas;
          worst_at = i + 1;
        }
      }
      const bool pass = est.std_error_valid && worst_sigma <= 4.0;
      report[name] = {
          {"max_deviation_sigmas", worst_sigma},
          {"worst_index", worst_at},
          {"band", "4 standard errors"},
          {"seed", opt.sim.seed},
          {"pass", pass},
      };
      if (!pass && ok && worst_message.empty()) {
        worst_message = std::string(name) + " deviates by " + format_double(worst_sigma, 4) +
                        " standard errors at linear index " + std::to_string(worst_at);
      }
      return pass;
    };
    const bool closed_leg = sigma_leg(closed, "closedform_vs_simulate");
    const bool lyap_leg = sigma_leg(lyap, "lyapunov_vs_simulate");
    ok = ok && closed_leg && lyap_leg;
  }

  report["pass"] = ok;

  OutputTarget target(opt.out.path);
  target.stream() << report.dump(2) << '\n';
  target.finish();

  if (!ok) throw ValidationError(worst_message);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

struct ReproduceOptions {
  std::string target = "fig2";
  OutputSpec out{Format::tsv_pgf, "", 12};
};

std::string canonical_filename(const std::string& target) {
  if (target == "fig2") return "OneDimVn.txt";
  if (target == "fig3") return "TwoDimField.txt";
  if (target == "fig4-left") return "TwoDimVn.txt";
  if (target == "fig4-right") return "TwoDimTotalVn.txt";
  return "ThreeDimDiagFaceN15.txt";
}

int cmd_reproduce(const ReproduceOptions& opt) {
  OutputSpec out = opt.out;
  if (out.path.empty()) out.path = canonical_filename(opt.target);
  const int prec = out.precision;

  Table table;
  if (opt.target == "fig2") {
    table.comments.push_back(
        "V_undirected_reference is an externally sourced analytic comparison series (n/2)");
    table.header = {"n", "V_directed", "V_undirected_reference"};
    const auto field = latvar::variance_field({1, 50});
    for (long long n = 1; n <= 50; ++n) {
      table.rows.push_back({std::to_string(n),
                            format_double(field.values[static_cast<std::size_t>(n - 1)], prec),
                            format_double(latvar::undirected_reference_1d(n), prec)});
    }
  } else if (opt.target == "fig3") {
    table.header = {"n", "m", "variance"};
    const latvar::LatticeSpec spec{2, 50};
    const auto field = latvar::variance_field(spec);
    for (long long i = 1; i <= spec.state_count(); ++i) {
      std::vector<std::string> row;
      append_coordinates(row, spec, i);
      row.push_back(format_double(field.values[static_cast<std::size_t>(i - 1)], prec));
      table.rows.push_back(std::move(row));
    }
  } else if (opt.target == "fig4-left" || opt.target == "fig4-right") {
    const auto diag = latvar::diagonal_variances_2d(50);
    std::vector<long long> idx(50);
    std::vector<double> val(50);
    double running = 0.0;
    for (long long n = 1; n <= 50; ++n) {
      idx[static_cast<std::size_t>(n - 1)] = n;
      running += diag[static_cast<std::size_t>(n - 1)];
      val[static_cast<std::size_t>(n - 1)] =
          (opt.target == "fig4-left") ? diag[static_cast<std::size_t>(n - 1)]
                                      : running / static_cast<double>(n);
    }
    const auto fit = latvar::fit_scaling(idx, val, latvar::FitModel::log_fit, 5, 50);
    table.comments.push_back("logfit: " + format_double(fit.a, 6) + "*ln(n) + " +
                             format_double(fit.b, 6) + " fitted over n in [5, 50]");
    table.header = (opt.target == "fig4-left")
                       ? std::vector<std::string>{"n", "Vn", "logfit"}
                       : std::vector<std::string>{"Nval", "TotalVnNorm", "logfit"};
    for (long long n = 1; n <= 50; ++n) {
      const double model = fit.a * std::log(static_cast<double>(n)) + fit.b;
      table.rows.push_back({std::to_string(n),
                            format_double(val[static_cast<std::size_t>(n - 1)], prec),
                            format_double(model, prec)});
    }
  } else if (opt.target == "fig5-table1") {
    // Diagonal slice of the 15^3 lattice: entry (n, m) is the variance at
    // (n, n, m); the slice's own diagonal is the cube diagonal.
    const latvar::LatticeSpec spec{3, 15};
    const auto field = latvar::variance_field(spec);
    table.headerless = true;
    for (long long n = 1; n <= 15; ++n) {
      std::vector<std::string> row;
      for (long long m = 1; m <= 15; ++m) {
        row.push_back(format_double(field.at(latvar::Coordinate::of(n, n, m)), prec));
      }
      table.rows.push_back(std::move(row));
    }
  } else {
    throw std::invalid_argument("unknown reproduce target: " + opt.target);
  }

  emit_table(table, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

struct ScalingOptions {
  int dim = 1;
  long long n_max = 100;
  OutputSpec out{Format::json_fmt, "-", 12};
};

json fit_to_json(const latvar::FitResult& fit) {
  const char* model = fit.model == latvar::FitModel::log_fit    ? "log_fit"
                      : fit.model == latvar::FitModel::sqrt_fit ? "sqrt_fit"
                                                                : "power_fit";
  return json{{"model", model},
              {"a", fit.a},
              {"b", fit.b},
              {"residual_rms", fit.residual_rms},
              {"fit_range", {fit.range_lo, fit.range_hi}}};
}

json sandwich_to_json(const latvar::SandwichReport& s) {
  return json{{"n", s.n},
              {"lower", s.lower},
              {"middle", s.middle},
              {"upper", s.upper},
              {"holds", s.holds()}};
}

std::vector<long long> geometric_marks(long long n_max) {
  std::vector<long long> marks;
  for (long long n = 1; n < n_max; n *= 2) marks.push_back(n);
  marks.push_back(n_max);
  return marks;
}

int cmd_scaling(const ScalingOptions& opt) {
  const long long budget = opt.dim == 1 ? 1'000'000 : opt.dim == 2 ? 10'000 : 1'000;
  if (opt.n_max < 1 || opt.n_max > budget) {
    throw std::length_error("n_max for dimension " + std::to_string(opt.dim) +
                            " must be in [1, " + std::to_string(budget) + "]");
  }

  json out = json::object();
  out["dimension"] = opt.dim;
  out["n_max"] = opt.n_max;

  if (opt.dim == 1) {
    if (opt.n_max < 10) throw std::length_error("1D scaling needs n_max >= 10");
    const auto [vt, tt] = latvar::limit_check_1d(opt.n_max);
    auto table_json = [](const latvar::ConvergenceTable& t) {
      json rows = json::array();
      for (std::size_t i = 0; i < t.index.size(); ++i) {
        rows.push_back({{"n", t.index[i]}, {"ratio", t.ratio[i]}, {"deviation", t.deviation[i]}});
      }
      return json{{"limit", t.limit}, {"rows", rows}};
    };
    out["variance_over_sqrt_n"] = table_json(vt);
    out["normalized_total_over_sqrt_n"] = table_json(tt);

    const auto field = latvar::variance_field({1, std::min<long long>(opt.n_max, 100'000)});
    std::vector<long long> idx(field.values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<long long>(i) + 1;
    out["power_fit"] = fit_to_json(
        latvar::fit_scaling(idx, field.values, latvar::FitModel::power_fit));
  } else if (opt.dim == 2) {
    const auto diag = latvar::diagonal_variances_2d(opt.n_max);
    json sandwiches = json::array();
    for (long long n : geometric_marks(std::max<long long>(opt.n_max / 2, 1))) {
      latvar::SandwichReport s{n, latvar::triangle_sum_2d(n),
                               diag[static_cast<std::size_t>(n - 1)],
                               latvar::triangle_sum_2d(2 * n)};
      sandwiches.push_back(sandwich_to_json(s));
    }
    out["sandwich"] = sandwiches;
    if (opt.n_max >= 5) {
      std::vector<long long> idx(static_cast<std::size_t>(opt.n_max));
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<long long>(i) + 1;
      out["log_fit"] = fit_to_json(latvar::fit_scaling(idx, diag, latvar::FitModel::log_fit, 5,
                                                       std::min<long long>(50, opt.n_max)));
    }
    // Boundedness of V_n(diag) - ln(n)/(4 pi).
    double lo = 1e300, hi = -1e300;
    for (long long n = 1; n <= opt.n_max; ++n) {
      const double x = diag[static_cast<std::size_t>(n - 1)] -
                       std::log(static_cast<double>(n)) / (4.0 * 3.141592653589793);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    out["log_law_offset"] = {{"min", lo}, {"max", hi}};
  } else {
    const auto diag = latvar::diagonal_variances_3d(opt.n_max);
    json sandwiches = json::array();
    for (long long n : geometric_marks(std::max<long long>(opt.n_max / 2, 1))) {
      const auto s = latvar::SandwichReport{n, latvar::pyramid_sum_3d(n).value,
                                            diag[static_cast<std::size_t>(n - 1)],
                                            latvar::pyramid_sum_3d(2 * n).value};
      sandwiches.push_back(sandwich_to_json(s));
    }
    out["sandwich"] = sandwiches;

    const auto tail = latvar::pyramid_sum_3d(opt.n_max);
    out["pyramid_sum"] = {{"n", tail.n},
                          {"value", tail.value},
                          {"tail_bound", tail.tail_bound},
                          {"fitted_c", tail.fitted_c}};

    if (opt.n_max >= 11) {
      const long long hi = std::min<long long>(50, opt.n_max);
      std::vector<long long> idx;
      std::vector<double> v_inc, t_inc;
      const auto series = latvar::return_prob_series(3, hi);
      for (long long n = 10; n <= hi; ++n) {
        idx.push_back(n);
        v_inc.push_back(diag[static_cast<std::size_t>(n - 1)] -
                        diag[static_cast<std::size_t>(n - 2)]);
        t_inc.push_back(series.values[static_cast<std::size_t>(n - 1)] / 6.0);
      }
      out["increment_fit"] =
          fit_to_json(latvar::fit_scaling(idx, t_inc, latvar::FitModel::power_fit));
      out["diagonal_increment_fit"] =
          fit_to_json(latvar::fit_scaling(idx, v_inc, latvar::FitModel::power_fit));
    }
  }

  OutputTarget target(opt.out.path);
  target.stream() << out.dump(2) << '\n';
  target.finish();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// random-walk
// ---------------------------------------------------------------------------

struct RandomWalkOptions {
  int dim = 1;
  int k_max = 10;
  long long walks = 100'000;
  std::uint64_t seed = 1;
  OutputSpec out;
};

int cmd_random_walk(const RandomWalkOptions& opt) {
  const auto empirical =
      latvar::simulate_random_walk_returns(opt.dim, opt.k_max, opt.walks, opt.seed);
  const auto analytic = latvar::return_prob_series(opt.dim, opt.k_max);

  Table table;
  table.header = {"k", "u2k_analytic", "u2k_empirical", "std_error"};
  for (int k = 0; k <= opt.k_max; ++k) {
    const double p = empirical.values[static_cast<std::size_t>(k)];
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(opt.walks));
    table.rows.push_back({std::to_string(k),
                          format_double(analytic.values[static_cast<std::size_t>(k)],
                                        opt.out.precision),
                          format_double(p, opt.out.precision),
                          format_double(se, opt.out.precision)});
  }
  emit_table(table, opt.out);
  return kExitOk;
}

void add_sim_options(CLI::App* cmd, latvar::SimulationConfig& sim, int& threads) {
  cmd->add_option("--dt", sim.dt, "Euler-Maruyama step (default 0.01/D)");
  cmd->add_option("--horizon", sim.horizon, "Total simulated time");
  cmd->add_option("--burn-in", sim.burn_in, "Discarded transient");
  cmd->add_option("--ensemble", sim.ensemble, "Independent trajectories");
  cmd->add_option("--threads", threads, "Worker threads (result is thread-count invariant)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state variance of leader-follower consensus on directed lattices"};
  app.require_subcommand(1);

  VarianceOptions var_opt;
  bool var_dt_given = false;
  auto* var = app.add_subcommand("variance", "Per-follower steady-state variance field");
  var->add_option("--dim", var_opt.dim, "Lattice dimension")->required()->check(CLI::Range(1, 3));
  var->add_option("--side", var_opt.side, "Side length N")->required();
  var->add_option("--method", var_opt.method, "closedform | lyapunov | simulate")
      ->check(CLI::IsMember({"closedform", "lyapunov", "simulate"}));
  var->add_flag("--exact", var_opt.exact, "Exact rational output (closedform, side <= 64)");
  var->add_option("--seed", var_opt.sim.seed, "RNG seed for --method simulate");
  var->add_option("--dump-laplacian", var_opt.dump_laplacian,
                  "Also write the grounded Laplacian as 'row col value' triples");
  add_output_options(var, var_opt.out);
  add_sim_options(var, var_opt.sim, var_opt.threads);
  var->callback([&] { var_dt_given = var->count("--dt") > 0; });

  CrosscheckOptions cc_opt;
  auto* cc = app.add_subcommand("crosscheck", "Cross-validate closedform, lyapunov, simulate");
  cc->add_option("--dim", cc_opt.dim, "Lattice dimension")->required()->check(CLI::Range(1, 3));
  cc->add_option("--side", cc_opt.side, "Side length N")->required();
  cc->add_option("--tolerance", cc_opt.tolerance, "Analytic-leg tolerance");
  cc->add_flag("--no-simulate", cc_opt.no_simulate, "Skip the Monte Carlo leg");
  cc->add_option("--seed", cc_opt.sim.seed, "RNG seed");
  add_output_options(cc, cc_opt.out);
  bool cc_dt_given = false;
  add_sim_options(cc, cc_opt.sim, cc_opt.threads);
  cc->callback([&] { cc_dt_given = cc->count("--dt") > 0; });

  ReproduceOptions rep_opt;
  auto* rep = app.add_subcommand("reproduce", "Regenerate the reference data files");
  rep->add_option("--target", rep_opt.target, "fig2 | fig3 | fig4-left | fig4-right | fig5-table1")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4-left", "fig4-right", "fig5-table1"}));
  add_output_options(rep, rep_opt.out);

  ScalingOptions sc_opt;
  auto* sc = app.add_subcommand("scaling", "Asymptotic scaling report (JSON)");
  sc->add_option("--dim", sc_opt.dim, "Lattice dimension")->required()->check(CLI::Range(1, 3));
  sc->add_option("--n-max", sc_opt.n_max, "Largest index (budget: 1e6 / 1e4 / 1e3 per dim)")
      ->required();
  sc->add_option("--out", sc_opt.out.path, "Output path, - for stdout");

  RandomWalkOptions rw_opt;
  auto* rw = app.add_subcommand("random-walk", "Empirical vs analytic return probabilities");
  rw->add_option("--dim", rw_opt.dim, "Lattice dimension")->required()->check(CLI::Range(1, 3));
  rw->add_option("--k-max", rw_opt.k_max, "Largest k (walk length 2k)")->required();
  rw->add_option("--walks", rw_opt.walks, "Number of independent walks");
  rw->add_option("--seed", rw_opt.seed, "RNG seed");
  add_output_options(rw, rw_opt.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitGuard;
  }

  try {
    if (var->parsed()) {
      if (!var_dt_given) var_opt.sim.dt = 0.01 / var_opt.dim;
      return cmd_variance(var_opt);
    }
    if (cc->parsed()) {
      if (!cc_dt_given) cc_opt.sim.dt = 0.01 / cc_opt.dim;
      return cmd_crosscheck(cc_opt);
    }
    if (rep->parsed()) return cmd_reproduce(rep_opt);
    if (sc->parsed()) return cmd_scaling(sc_opt);
    if (rw->parsed()) return cmd_random_walk(rw_opt);
  } catch (const ValidationError& e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::length_error& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitGuard;
  }
  return kExitOk;
}
