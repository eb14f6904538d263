#include "phifloor/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <variant>

#include "phifloor/asymptotics.hpp"
#include "phifloor/aux_sums.hpp"
#include "phifloor/floor_sums.hpp"
#include "phifloor/parallel.hpp"

namespace phifloor::cli {

namespace {

using Cell = std::variant<u64, i64, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::size_t failed_rows{0};
  std::string failure;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (const char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + "\"";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
        }
        return v;
      },
      c);
}

nlohmann::json config_echo(const RunConfig& c) {
  nlohmann::json j;
  j["subcommand"] = c.subcommand;
  if (c.x) j["x"] = *c.x;
  if (c.x_min) j["x_min"] = *c.x_min;
  if (c.x_max) j["x_max"] = *c.x_max;
  j["grid_ratio"] = c.grid_ratio;
  j["n"] = c.n;
  j["delta"] = c.delta;
  j["weighted"] = !c.unweighted;
  j["k"] = c.k;
  j["samples"] = c.samples;
  j["count"] = c.count;
  j["d"] = c.split_d;
  j["tolerance"] = c.tolerance;
  j["exact_cap"] = c.exact_cap;
  j["method"] = c.method;
  j["series"] = c.series;
  if (!c.input_path.empty()) j["input"] = c.input_path;
  j["column"] = c.column;
  j["memory_budget"] = c.memory_budget;
  j["seed"] = c.seed;
  return j;
}

void emit(const Table& t, const RunConfig& cfg, double elapsed, std::ostream& os) {
  if (cfg.format == OutputFormat::csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << '\n';
    }
    return;
  }
  nlohmann::json doc;
  doc["metadata"]["tool"] = "phifloor";
  doc["metadata"]["version"] = kVersion;
  doc["metadata"]["config"] = config_echo(cfg);
  if (cfg.timing) doc["metadata"]["elapsed_seconds"] = elapsed;
  doc["columns"] = t.columns;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
    doc["rows"].push_back(std::move(r));
  }
  os << doc.dump(2) << '\n';
}

void error_record(std::ostream& err, int code, const std::string& kind, const std::string& message) {
  nlohmann::json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  err << j.dump() << '\n';
}

SumMethod parse_method(const std::string& m) {
  if (m == "auto") return SumMethod::automatic;
  if (m == "blocks") return SumMethod::blocks;
  if (m == "streaming") return SumMethod::streaming;
  throw UsageError("unknown --method '" + m + "' (auto, blocks, streaming)");
}

std::vector<u64> grid_points(const RunConfig& c) {
  if (c.x && (c.x_min || c.x_max)) throw UsageError("--x cannot be combined with --x-min/--x-max");
  if (c.x) return {*c.x};
  if (c.x_min && c.x_max) {
    if (*c.x_max < *c.x_min) throw UsageError("--x-max must be >= --x-min");
    return geometric_grid(*c.x_min, *c.x_max, c.grid_ratio);
  }
  throw UsageError(c.subcommand + " needs --x or both --x-min and --x-max");
}

u64 single_x(const RunConfig& c) {
  if (!c.x || c.x_min || c.x_max) throw UsageError(c.subcommand + " needs exactly --x");
  return *c.x;
}

const char* pass_fail(bool ok) { return ok ? "pass" : "fail"; }

// -- subcommands ------------------------------------------------------------

Table cmd_sum_phi_floor(const RunConfig& c) {
  Table t{{"x", "value"}, {}, 0, {}};
  const SumMethod m = parse_method(c.method);
  for (const u64 x : grid_points(c)) t.rows.push_back({x, sum_phi_floor(x, m, c.memory_budget)});
  return t;
}

Table cmd_sum_phi_over_floor(const RunConfig& c) {
  Table t{{"x", "value", "error_bound", "terms", "exact"}, {}, 0, {}};
  const SumMethod m = parse_method(c.method);
  for (const u64 x : grid_points(c)) {
    const SumResult r = sum_phi_over_floor(x, m, c.memory_budget, c.exact_cap);
    t.rows.push_back({x, r.value(), r.error_bound(), r.term_count, r.exact ? r.exact->get_str() : std::string()});
  }
  return t;
}

Table cmd_aux_sum(const RunConfig& c) {
  const AuxSumParams p{single_x(c), c.n, c.delta, !c.unweighted};
  const AccurateSum s = frak_S(p);
  const double env = p.x >= 2 ? huxley_envelope(p.x) : NAN;
  Table t{{"x", "n", "delta", "weighted", "value", "error_bound", "terms", "abs_over_huxley"}, {}, 0, {}};
  t.rows.push_back({p.x, p.n, static_cast<i64>(p.delta), p.weighted, s.value(), s.error_bound(), s.term_count(),
                    std::fabs(s.value()) / env});
  return t;
}

Table cmd_mobius_check(const RunConfig& c) {
  const AuxSumParams p{single_x(c), c.n, c.delta, true};
  const AccurateSum direct = frak_S(p);
  const AccurateSum mobius = frak_S_star_mobius(p);
  const double diff = std::fabs(direct.value() - mobius.value());
  const double bound = direct.error_bound() + mobius.error_bound();
  Table t{{"x", "n", "delta", "direct", "mobius", "difference", "bound", "status"}, {}, 0, {}};
  const bool ok = diff <= bound;
  t.rows.push_back({p.x, p.n, static_cast<i64>(p.delta), direct.value(), mobius.value(), diff, bound,
                    std::string(pass_fail(ok))});
  if (!ok) {
    t.failed_rows = 1;
    t.failure = "direct and Moebius-decomposed sums differ beyond the accumulated bound";
  }
  return t;
}

Table cmd_residuals_thm1(const RunConfig& c) {
  const auto grid = grid_points(c);
  const Constants k = compute_constants(c.tolerance, c.memory_budget);
  Table t{{"x", "sum", "sum_error_bound", "main_term", "main_term_uncertainty", "residual", "ratio_sqrt",
           "ratio_wu", "ratio_huxley", "below_sqrt"},
          {}, 0, {}};
  for (const auto& r : residual_series_thm1(grid, k, c.memory_budget)) {
    t.rows.push_back({r.x, r.sum_value, r.sum_error_bound, r.main_term, r.main_term_uncertainty, r.residual,
                      r.ratio_sqrt, r.ratio_wu, r.ratio_huxley, std::fabs(r.ratio_sqrt) < 1.0});
  }
  return t;
}

Table cmd_thm2_ratios(const RunConfig& c) {
  const SumMethod m = parse_method(c.method);
  const auto grid = grid_points(c);
  const Constants k = compute_constants(1e-6, c.memory_budget);
  Table t{{"x", "sum", "ratio", "thm2_lower", "thm2_upper", "wu_lower", "wu_upper", "within_thm2_constants"},
          {}, 0, {}};
  std::vector<Thm2Record> recs(grid.size());
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i);
    errors.guard(j, [&] { recs[j] = residual_thm2(grid[j], m, c.memory_budget); });
  }
  errors.rethrow();
  for (const auto& r : recs) {
    t.rows.push_back({r.x, r.sum, r.ratio, k.thm2_lower, k.thm2_upper, k.wu_lower, k.wu_upper,
                      r.ratio >= k.thm2_lower && r.ratio <= k.thm2_upper});
  }
  return t;
}

Table cmd_divisor_delta(const RunConfig& c) {
  Table t{{"x", "divisor_sum", "main_term", "delta", "ratio_sqrt", "ratio_huxley"}, {}, 0, {}};
  for (const u64 x : grid_points(c)) {
    if (x < 3) {
      t.rows.push_back({x, divisor_sum(x), static_cast<double>(divisor_sum(x)) - divisor_delta(x),
                        divisor_delta(x), NAN, NAN});
      continue;
    }
    const DivisorRecord r = divisor_record(x);
    t.rows.push_back({r.x, r.divisor_sum, r.main_term, r.delta, r.ratio_sqrt, r.ratio_huxley});
  }
  return t;
}

std::string rounded5(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(5);
  os << v;
  return os.str();
}

Table cmd_constants(const RunConfig& c) {
  const Constants k = compute_constants(c.tolerance, c.memory_budget);
  const C0Estimate series = constant_C0_zeta_series(c.tolerance);
  Table t{{"name", "value", "lo", "hi", "rounded", "note"}, {}, 0, {}};
  auto point = [&](const std::string& name, double v, const std::string& note) {
    t.rows.push_back({name, v, v, v, rounded5(v), note});
  };
  point("zeta2", k.zeta2, "pi^2/6");
  point("euler_gamma", k.euler_gamma, "30-digit literal");
  t.rows.push_back({std::string("c0"), k.c0.mid(), k.c0.lo, k.c0.hi, rounded5(k.c0.mid()),
                    std::string("direct sum with partial-summation tail bracket")});
  t.rows.push_back({std::string("c0_zeta_series"), series.bracket.mid(), series.bracket.lo, series.bracket.hi,
                    rounded5(series.bracket.mid()), std::string("alternating zeta-ratio series")});
  point("c_admissible", k.c_admissible.to_double(), "6!/(3*6^6) = 5/972");
  point("thm2_lower", k.thm2_lower, "(285/416)/zeta(2)");
  point("thm2_upper", k.thm2_upper, "(285/416)/zeta(2) + 131/416");
  point("wu_lower", k.wu_lower, "(2/3)/zeta(2)");
  point("wu_upper", k.wu_upper, "(2/3)/zeta(2) + 1/3");
  point("bdhps_lower", k.bdhps_lower, "derived: (2629/4009)/zeta(2)");
  point("bdhps_upper", k.bdhps_upper, "derived: (2629/4009)/zeta(2) + 1380/4009");
  point("split_threshold", static_cast<double>(choose_D(3).threshold), "smallest x with D(x) >= 972/5");
  const bool agree = k.c0.lo <= series.bracket.hi && series.bracket.lo <= k.c0.hi;
  if (!agree) {
    t.failed_rows = 1;
    t.failure = "the two C0 brackets are disjoint";
  }
  return t;
}

Table cmd_decomposition_check(const RunConfig& c) {
  Table t{{"x", "head_terms", "d_max", "direct", "decomposed", "difference", "bound", "exact_equal", "status"},
          {}, 0, {}};
  for (const u64 x : grid_points(c)) {
    const DecompositionCheck d = s_star_decomposition_check(x, c.exact_cap);
    const bool ok = d.difference <= d.bound && d.exact_equal.value_or(true);
    t.rows.push_back({d.x, d.head_terms, d.d_max, d.direct, d.decomposed, d.difference, d.bound,
                      d.exact_equal ? std::string(*d.exact_equal ? "true" : "false") : std::string(),
                      std::string(pass_fail(ok))});
    if (!ok) ++t.failed_rows;
  }
  if (t.failed_rows) t.failure = "decomposition identity violated";
  return t;
}

Table cmd_abel_check(const RunConfig& c) {
  Table t{{"x", "d", "upper", "lhs", "rhs", "difference", "bound", "status"}, {}, 0, {}};
  for (const u64 x : grid_points(c)) {
    const AbelCheck a = abel_identity_check(x, c.split_d);
    const bool ok = a.difference <= a.bound;
    t.rows.push_back({a.x, a.d, a.upper, a.lhs, a.rhs, a.difference, a.bound, std::string(pass_fail(ok))});
    if (!ok) ++t.failed_rows;
  }
  if (t.failed_rows) t.failure = "Abel summation identity violated";
  return t;
}

Table cmd_derivative_check(const RunConfig& c) {
  std::vector<AdmissibleTuple> tuples;
  if (c.count > 0) {
    if (c.x) throw UsageError("derivative-check takes either --count or an explicit --x/--k/--n tuple");
    tuples = sample_admissible(c.seed, c.count);
  } else {
    tuples.push_back({single_x(c), c.k, c.n, c.delta});
  }
  Table t{{"x", "k", "n", "delta", "m", "t", "order", "min_abs", "max_abs", "lower_bound", "implied_c",
           "lower_bound_held", "sign_alternates", "fd_rel_error", "status"},
          {}, 0, {}};
  std::vector<DerivativeCheckReport> reports(tuples.size());
  const auto count = static_cast<std::ptrdiff_t>(tuples.size());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i);
    errors.guard(j, [&] {
      const auto& tp = tuples[j];
      reports[j] = derivative_check(tp.x, tp.k, tp.n, tp.delta, c.samples);
    });
  }
  errors.rethrow();
  for (const auto& rep : reports) {
    for (const auto& r : rep.records) {
      const bool fd_ok = r.fd_max_rel_error < 1e-6;
      const bool ok = r.lower_bound_held && r.sign_alternates && fd_ok;
      t.rows.push_back({rep.x, rep.k, rep.n, static_cast<i64>(rep.delta), rep.m, rep.t,
                        static_cast<i64>(r.order), r.min_abs, r.max_abs, r.lower_bound, r.implied_c,
                        r.lower_bound_held, r.sign_alternates, r.fd_max_rel_error, std::string(pass_fail(ok))});
      if (!ok) ++t.failed_rows;
    }
  }
  if (t.failed_rows) t.failure = "derivative hypothesis check failed";
  return t;
}

std::pair<std::vector<double>, std::vector<double>> read_series_csv(const std::string& path,
                                                                    const std::string& column) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw IoError(path + " is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  const auto header = split(line);
  std::ptrdiff_t ix = -1, iy = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") ix = static_cast<std::ptrdiff_t>(i);
    if (header[i] == column) iy = static_cast<std::ptrdiff_t>(i);
  }
  if (ix < 0 || iy < 0) throw IoError(path + " lacks an 'x' or '" + column + "' column");
  std::vector<double> xs, ys;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() <= static_cast<std::size_t>(std::max(ix, iy))) throw IoError("short row in " + path);
    xs.push_back(std::stod(cells[static_cast<std::size_t>(ix)]));
    ys.push_back(std::stod(cells[static_cast<std::size_t>(iy)]));
  }
  return {xs, ys};
}

Table cmd_fit(const RunConfig& c) {
  std::vector<double> xs, ys;
  std::string label = c.series;
  if (!c.input_path.empty()) {
    std::tie(xs, ys) = read_series_csv(c.input_path, c.column);
    label = "file:" + c.column;
  } else {
    const auto grid = grid_points(c);
    if (c.series == "thm1") {
      const Constants k = compute_constants(c.tolerance, c.memory_budget);
      for (const auto& r : residual_series_thm1(grid, k, c.memory_budget)) {
        xs.push_back(static_cast<double>(r.x));
        ys.push_back(r.residual);
      }
    } else if (c.series == "divisor") {
      for (const u64 x : grid) {
        xs.push_back(static_cast<double>(x));
        ys.push_back(divisor_delta(x));
      }
    } else {
      throw UsageError("unknown --series '" + c.series + "' (thm1, divisor)");
    }
  }
  const FitResult f = fit_log_log(xs, ys);
  Table t{{"series", "points_used", "slope", "intercept", "r_squared", "x_first", "x_last"}, {}, 0, {}};
  t.rows.push_back({label, static_cast<u64>(f.points_used), f.slope, f.intercept, f.r_squared,
                    xs.empty() ? NAN : xs.front(), xs.empty() ? NAN : xs.back()});
  return t;
}

Table dispatch(const RunConfig& c) {
  if (c.subcommand == "sum-phi-floor") return cmd_sum_phi_floor(c);
  if (c.subcommand == "sum-phi-over-floor") return cmd_sum_phi_over_floor(c);
  if (c.subcommand == "aux-sum") return cmd_aux_sum(c);
  if (c.subcommand == "mobius-check") return cmd_mobius_check(c);
  if (c.subcommand == "residuals-thm1") return cmd_residuals_thm1(c);
  if (c.subcommand == "thm2-ratios") return cmd_thm2_ratios(c);
  if (c.subcommand == "divisor-delta") return cmd_divisor_delta(c);
  if (c.subcommand == "constants") return cmd_constants(c);
  if (c.subcommand == "decomposition-check") return cmd_decomposition_check(c);
  if (c.subcommand == "abel-check") return cmd_abel_check(c);
  if (c.subcommand == "derivative-check") return cmd_derivative_check(c);
  if (c.subcommand == "fit") return cmd_fit(c);
  throw UsageError("unknown subcommand '" + c.subcommand + "'");
}

void validate(const RunConfig& c) {
  if (!(c.grid_ratio > 1.0)) throw UsageError("--ratio must exceed 1");
  if (c.workers < 1) throw UsageError("--workers must be >= 1");
  if (c.exact_cap < 1 || c.samples < 1 || c.memory_budget < 1) throw UsageError("caps must be positive");
  if (c.delta != 0 && c.delta != 1) throw UsageError("--delta must be 0 or 1");
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    omp_set_num_threads(config.workers);
    const auto start = std::chrono::steady_clock::now();
    const Table table = dispatch(config);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (config.output_path.empty()) {
      emit(table, config, elapsed, out);
    } else {
      std::ofstream os(config.output_path);
      if (!os) throw IoError("cannot open output " + config.output_path);
      emit(table, config, elapsed, os);
      if (!os) throw IoError("write failed for " + config.output_path);
    }
    if (table.failed_rows > 0) {
      error_record(err, kCheckFailed, "check_failed",
                   table.failure + " (" + std::to_string(table.failed_rows) + " row(s))");
      return kCheckFailed;
    }
    return kOk;
  } catch (const UsageError& e) {
    error_record(err, kUsage, "usage", e.what());
    return kUsage;
  } catch (const ResourceError& e) {
    error_record(err, kResource, "resource", e.what());
    return kResource;
  } catch (const std::bad_alloc&) {
    error_record(err, kResource, "resource", "out of memory");
    return kResource;
  } catch (const ArithmeticError& e) {
    error_record(err, kArithmetic, "arithmetic", e.what());
    return kArithmetic;
  } catch (const DomainError& e) {
    error_record(err, kDomain, "domain", e.what());
    return kDomain;
  } catch (const IoError& e) {
    error_record(err, kIo, "io", e.what());
    return kIo;
  } catch (const std::exception& e) {
    error_record(err, kInternal, "internal", e.what());
    return kInternal;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const char* env = std::getenv(kMemoryBudgetEnv)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) {
      error_record(err, kUsage, "usage", std::string(kMemoryBudgetEnv) + " must be a positive byte count");
      return kUsage;
    }
    cfg.memory_budget = static_cast<std::size_t>(v);
  }

  CLI::App app{"Exact totient floor sums, auxiliary sums and error-term diagnostics"};
  app.require_subcommand(1);
  std::string format = "csv";
  u64 x = 0, x_min = 0, x_max = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers, "OpenMP worker count")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", cfg.output_path, "write the table here instead of stdout");
    sub->add_option("--memory-budget", cfg.memory_budget, "bytes per sieve segment");
    sub->add_option("--seed", cfg.seed, "seed for sampled checks");
    sub->add_flag("--timing", cfg.timing, "record elapsed time in JSON metadata");
  };
  auto grid = [&](CLI::App* sub) {
    sub->add_option("--x", x, "single x");
    sub->add_option("--x-min", x_min, "grid start");
    sub->add_option("--x-max", x_max, "grid end");
    sub->add_option("--ratio", cfg.grid_ratio, "geometric grid ratio (> 1)");
  };
  auto single = [&](CLI::App* sub) { sub->add_option("--x", x, "x")->required(); };

  struct Spec {
    const char* name;
    const char* help;
  };
  const Spec specs[] = {
      {"sum-phi-floor", "S(x) = sum phi(floor(x/n))"},
      {"sum-phi-over-floor", "S*(x) = sum phi(floor(x/n))/floor(x/n)"},
      {"aux-sum", "sawtooth-weighted totient sum over (N, 2N]"},
      {"mobius-check", "direct vs Moebius-decomposed weighted auxiliary sum"},
      {"residuals-thm1", "R*(x) = S*(x) - C0 x against the three envelopes"},
      {"thm2-ratios", "S(x)/(x ln x) against the bracket constants"},
      {"divisor-delta", "divisor sum and its discrepancy"},
      {"constants", "zeta(2), gamma, C0 and the bound constants"},
      {"decomposition-check", "term-by-term vs block decomposition of S*(x)"},
      {"abel-check", "Abel summation identity with exact step integral"},
      {"derivative-check", "derivative sandwich for x/(kz+delta) on [M, 2M]"},
      {"fit", "log-log exponent fit of a residual series"},
  };
  for (const auto& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    const std::string name = s.name;
    if (name == "aux-sum" || name == "mobius-check") {
      single(sub);
      sub->add_option("--n", cfg.n, "N")->required();
      sub->add_option("--delta", cfg.delta, "0 or 1");
      if (name == "aux-sum") sub->add_flag("--unweighted", cfg.unweighted, "use phi(n) instead of phi(n)/n");
    } else if (name == "derivative-check") {
      sub->add_option("--x", x, "x");
      sub->add_option("--k", cfg.k, "k");
      sub->add_option("--n", cfg.n, "N");
      sub->add_option("--delta", cfg.delta, "0 or 1");
      sub->add_option("--samples", cfg.samples, "sample points on [M, 2M]");
      sub->add_option("--count", cfg.count, "draw this many seeded admissible tuples");
    } else if (name == "constants") {
      sub->add_option("--tolerance", cfg.tolerance, "C0 bracket width (>= 1e-12)");
    } else {
      grid(sub);
    }
    if (name == "sum-phi-floor" || name == "sum-phi-over-floor" || name == "thm2-ratios") {
      sub->add_option("--method", cfg.method, "auto, blocks or streaming");
    }
    if (name == "sum-phi-over-floor" || name == "decomposition-check") {
      sub->add_option("--exact-cap", cfg.exact_cap, "largest x given an exact rational value");
    }
    if (name == "residuals-thm1" || name == "fit") {
      sub->add_option("--tolerance", cfg.tolerance, "C0 bracket width (>= 1e-12)");
    }
    if (name == "abel-check") sub->add_option("--d", cfg.split_d, "split point D (>= 972/5)");
    if (name == "fit") {
      sub->add_option("--series", cfg.series, "thm1 or divisor");
      sub->add_option("--input", cfg.input_path, "fit a CSV file with an x column instead");
      sub->add_option("--column", cfg.column, "value column of --input");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_record(err, kUsage, "usage", e.what());
    return kUsage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const char* opt) {
    try {
      return sub->get_option(opt)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (given("--x")) cfg.x = x;
  if (given("--x-min")) cfg.x_min = x_min;
  if (given("--x-max")) cfg.x_max = x_max;
  cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  return run(cfg, out, err);
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"phifloor"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace phifloor::cli
