#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "binomix/cli.hpp"
#include "binomix/densdiff.hpp"
#include "binomix/density.hpp"
#include "binomix/error.hpp"
#include "binomix/estimator.hpp"
#include "binomix/io.hpp"
#include "binomix/kernels.hpp"
#include "binomix/lepski.hpp"
#include "binomix/oracle.hpp"
#include "binomix/parallel.hpp"
#include "binomix/simlab.hpp"

namespace binomix {
namespace {

using nlohmann::ordered_json;
using io::format_double;

// Thrown for bad flag values found after parsing; maps to exit code 1.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::string kernel = "epanechnikov";
  int kernel_order = 2;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string config;
  std::vector<std::string> recorded;  // flags as given, minus output/worker/config ones
  std::string command;
  bool seeded = false;
};

struct Values {
  std::string input;
  double h = 0.0;
  std::string grid;
  double point = 0.5;
  bool clamp = false;
  double alpha = 0.05;
  int boot_reps = 1000;
  std::string mode = "binomial";
  std::string tune = "joint";
  std::string grid_h = "0.2:2:0.1";
  std::string grid_order = "2,4,6,8";
  double eps = 0.05;
  std::size_t n = 0;
  std::string targets = "30:100:5";
  int reps = 0;
  std::string n_list = "500,2000";
  std::int64_t t = 3000;
  double s = 2.0;
  std::string density = "beta:2,2";
  std::string t_grid = "10,25,50,100,250";
  std::string h_grid = "0.1,0.15,0.2,0.3";
  std::string u_grid = "0.3,0.5,0.7";
  double safety = 1.001;
};

std::string quote(const std::string& msg) {
  std::string q;
  for (char c : msg) {
    if (c == '"' || c == '\\') q += '\\';
    q += c == '\n' ? ' ' : c;
  }
  return q;
}

int fail(int code, const char* kind, const std::string& msg) {
  std::cerr << "error: code=" << code << " kind=" << kind << " msg=\"" << quote(msg) << "\"\n";
  return code;
}

std::vector<std::string> meta_lines(const Common& c) {
  std::string flags;
  for (const auto& f : c.recorded) flags += (flags.empty() ? "" : " ") + f;
  std::vector<std::string> m{std::string("binomix ") + kVersion, "command: " + c.command,
                             "flags: " + flags};
  m.push_back("seed: " + (c.seeded ? std::to_string(c.seed) : std::string("none")));
  return m;
}

ordered_json meta_json(const Common& c) {
  ordered_json m;
  m["version"] = kVersion;
  m["command"] = c.command;
  m["flags"] = c.recorded;
  if (c.seeded)
    m["seed"] = c.seed;
  else
    m["seed"] = nullptr;
  return m;
}

// Emits either the CSV table or a JSON object with the same rows.
void emit_table(const Common& c, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows,
                const std::vector<std::string>& extra_meta = {}, ordered_json extra = {}) {
  if (c.format == "json") {
    ordered_json doc;
    doc["meta"] = meta_json(c);
    for (auto& [k, v] : extra.items()) doc[k] = v;
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json o;
      for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string& cell = r[i];
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end && *end == '\0' && cell != "true" && cell != "false")
          o[header[i]] = v;
        else if (cell == "true" || cell == "false")
          o[header[i]] = cell == "true";
        else
          o[header[i]] = cell;
      }
      arr.push_back(o);
    }
    doc["rows"] = arr;
    io::write_output(c.out, doc.dump(2) + "\n");
    return;
  }
  io::CsvTable t;
  t.meta = meta_lines(c);
  t.meta.insert(t.meta.end(), extra_meta.begin(), extra_meta.end());
  t.header = header;
  t.rows = rows;
  io::write_output(c.out, io::render_csv(t));
}

void report_input(const BinomialSample& s) {
  const auto d = io::summarize_input(s);
  std::cerr << "input: n=" << d.n << " t_tilde=" << format_double(d.t_tilde)
            << " t_min=" << d.t_min << " t_max=" << d.t_max << "\n";
}

KernelSpec make_kernel(const Common& c) {
  if (c.kernel == "epanechnikov") return KernelSpec::epanechnikov();
  if (c.kernel == "legendre") return KernelSpec::legendre(c.kernel_order);
  throw UsageError("unknown kernel '" + c.kernel + "'");
}

std::vector<double> eval_points(const Values& v) {
  std::vector<double> pts = v.grid.empty() ? std::vector<double>{v.point} : io::parse_real_list(v.grid);
  for (double u : pts)
    if (!(u > 0.0 && u < 1.0))
      throw UsageError("evaluation points must lie in (0, 1), got " + format_double(u));
  return pts;
}

void require_seed(const Common& c) {
  if (!c.seeded) throw UsageError("--seed is required for " + c.command);
}

void cmd_estimate(const Common& c, const Values& v) {
  if (!(v.h > 0.0)) throw UsageError("--h must be positive");
  const auto pts = eval_points(v);
  const KernelSpec k = make_kernel(c);
  const auto s = io::parse_input(v.input);
  report_input(s);
  const auto est = kde_grid(s, k, v.h, pts, v.clamp);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < pts.size(); ++i)
    rows.push_back({format_double(pts[i]), format_double(est[i])});
  emit_table(c, {"u", "estimate"}, rows);
}

void cmd_ci(const Common& c, const Values& v) {
  if (!(v.h > 0.0)) throw UsageError("--h must be positive");
  if (!(v.alpha > 0.0 && v.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  const auto pts = eval_points(v);
  const KernelSpec k = make_kernel(c);
  const auto s = io::parse_input(v.input);
  report_input(s);
  std::vector<std::vector<std::string>> rows;
  for (double u : pts) {
    const auto r = confidence_interval(s, k, v.h, u, v.alpha);
    rows.push_back({format_double(u), format_double(r.estimate), format_double(r.se),
                    format_double(r.ci_lo), format_double(r.ci_hi)});
  }
  emit_table(c, {"u", "estimate", "se", "ci_lo", "ci_hi"}, rows);
}

void cmd_lepski(const Common& c, const Values& v) {
  require_seed(c);
  if (!(v.point > 0.0 && v.point < 1.0)) throw UsageError("--point must lie in (0, 1)");
  if (!(v.alpha > 0.0 && v.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (v.boot_reps < 1) throw UsageError("--boot-reps must be >= 1");
  const BandwidthGrid grid = v.grid.empty() ? BandwidthGrid::defaults() : BandwidthGrid::parse(v.grid);
  const KernelSpec k = make_kernel(c);
  const auto s = io::parse_input(v.input);
  report_input(s);
  LepskiConfig cfg;
  cfg.alpha = v.alpha;
  cfg.bootstrap_reps = v.boot_reps;
  cfg.seed = c.seed;
  cfg.u = v.point;
  const auto r = lepski_select(s, k, grid, cfg);

  if (c.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& st : r.trace)
      rows.push_back({format_double(st.h), format_double(st.estimate), format_double(st.statistic),
                      format_double(st.critical), st.rejected ? "true" : "false"});
    emit_table(c, {"h", "estimate", "statistic", "critical", "rejected"}, rows,
               {"selected_h: " + format_double(r.h),
                std::string("all_rejected: ") + (r.all_rejected ? "true" : "false"),
                "first_rejection: " + std::to_string(r.first_rejection)});
    return;
  }
  ordered_json doc;
  doc["meta"] = meta_json(c);
  doc["point"] = v.point;
  doc["alpha"] = v.alpha;
  doc["boot_reps"] = v.boot_reps;
  doc["kernel"] = k.name();
  doc["selected_h"] = r.h;
  doc["selected_index"] = r.index;
  doc["all_rejected"] = r.all_rejected;
  if (r.first_rejection >= 0)
    doc["first_rejection"] = r.first_rejection;
  else
    doc["first_rejection"] = nullptr;
  ordered_json trace = ordered_json::array();
  for (const auto& st : r.trace) {
    ordered_json o;
    o["h"] = st.h;
    o["estimate"] = st.estimate;
    o["statistic"] = st.statistic;
    o["critical"] = st.critical;
    o["rejected"] = st.rejected;
    trace.push_back(o);
  }
  doc["trace"] = trace;
  io::write_output(c.out, doc.dump(2) + "\n");
}

void cmd_diff(const Common& c, const Values& v) {
  if (v.mode != "true" && v.mode != "binomial") throw UsageError("--mode must be true or binomial");
  if (v.tune != "joint" && v.tune != "separate" && v.tune != "fixed")
    throw UsageError("--tune must be joint, separate or fixed");
  if (!(v.eps > 0.0 && v.eps < 0.5)) throw UsageError("--eps must lie in (0, 0.5)");
  if (v.tune == "fixed" && !(v.h > 0.0)) throw UsageError("--tune fixed needs --h > 0");
  if (v.tune != "fixed") require_seed(c);
  const auto pts = eval_points(v);
  std::vector<TuningPair> grid;
  if (v.tune != "fixed") {
    const auto hs = io::parse_real_list(v.grid_h);
    std::vector<int> orders;
    for (auto o : io::parse_int_list(v.grid_order)) {
      legendre_kernel(static_cast<int>(o));
      orders.push_back(static_cast<int>(o));
    }
    for (double h : hs)
      if (!(h > 0.0)) throw UsageError("--grid-h values must be positive");
    grid = tuning_grid(hs, orders);
  }
  const KernelSpec fixed_kernel = make_kernel(c);

  TwoGroupSample s = [&] {
    if (v.mode == "true") return io::parse_proportions(v.input);
    const auto b = io::parse_input(v.input);
    report_input(b);
    return TwoGroupSample::from_binomial(b);
  }();
  check_positivity(s, v.eps);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> extra_meta{"mode: " + v.mode, "tune: " + v.tune};
  ordered_json extra;
  extra["mode"] = v.mode;
  extra["tune"] = v.tune;
  auto pair_json = [](const TuningPair& p) {
    ordered_json o;
    o["h"] = p.h;
    o["order"] = p.order;
    return o;
  };
  auto pair_text = [](const TuningPair& p) {
    return "h=" + format_double(p.h) + " order=" + std::to_string(p.order);
  };
  if (v.tune == "fixed") {
    for (double u : pts) {
      const double tau = s.binomial() ? diff_kde_binomial(s, fixed_kernel, v.h, u)
                                      : diff_kde_true(s, fixed_kernel, v.h, u);
      rows.push_back({format_double(u), format_double(tau)});
    }
    extra_meta.push_back("selected: h=" + format_double(v.h) + " kernel=" + fixed_kernel.name());
    extra["selected"] = {{"h", v.h}, {"kernel", fixed_kernel.name()}};
  } else if (v.tune == "joint") {
    const auto j = select_tuning_joint(s, grid, c.seed, v.eps);
    const auto fit = s.subset(j.folds.fit);
    for (double u : pts) rows.push_back({format_double(u), format_double(diff_estimate(fit, j.selected, u))});
    extra_meta.push_back("selected: " + pair_text(j.selected));
    extra["selected"] = pair_json(j.selected);
    ordered_json risks = ordered_json::array();
    for (const auto& r : j.risks) {
      ordered_json o = pair_json(r.pair);
      o["risk"] = r.risk;
      o["risk_total_n"] = r.risk_total_n;
      risks.push_back(o);
    }
    extra["risks"] = risks;
  } else {
    const auto sp = select_tuning_separate(s, grid, c.seed, v.eps);
    const auto fit = s.subset(sp.folds.fit);
    for (double u : pts)
      rows.push_back({format_double(u),
                      format_double(diff_estimate_separate(fit, sp.group1, sp.group0, u))});
    extra_meta.push_back("selected_group1: " + pair_text(sp.group1));
    extra_meta.push_back("selected_group0: " + pair_text(sp.group0));
    extra["selected"] = {{"group1", pair_json(sp.group1)}, {"group0", pair_json(sp.group0)}};
  }
  emit_table(c, {"u", "tau_hat"}, rows, extra_meta, extra);
}

void cmd_sim1(const Common& c, const Values& v) {
  require_seed(c);
  Sim1Config cfg;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  if (v.n) cfg.n = v.n;
  if (v.reps) cfg.replications = v.reps;
  cfg.targets = io::parse_real_list(v.targets);
  if (v.h > 0.0) cfg.h = v.h;
  cfg.u = v.point;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : run_sim1(cfg))
    rows.push_back({format_double(r.t_tilde), r.estimator, format_double(r.bias), format_double(r.se)});
  emit_table(c, {"t_tilde", "estimator", "bias", "se"}, rows,
             {"n: " + std::to_string(cfg.n), "replications: " + std::to_string(cfg.replications)});
}

void cmd_sim2(const Common& c, const Values& v) {
  require_seed(c);
  Sim2Config cfg;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  if (v.reps) cfg.replications = v.reps;
  cfg.n_list.clear();
  for (auto n : io::parse_int_list(v.n_list)) {
    if (n < 4) throw UsageError("--n-list values must be >= 4");
    cfg.n_list.push_back(static_cast<std::size_t>(n));
  }
  cfg.h_grid = io::parse_real_list(v.grid_h);
  cfg.order_grid.clear();
  for (auto o : io::parse_int_list(v.grid_order)) {
    legendre_kernel(static_cast<int>(o));
    cfg.order_grid.push_back(static_cast<int>(o));
  }
  cfg.u = v.point;
  cfg.eps = v.eps;
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : run_sim2(cfg))
    rows.push_back({std::to_string(r.n), r.method, format_double(r.bias), format_double(r.se)});
  emit_table(c, {"n", "method", "bias", "se"}, rows,
             {"replications: " + std::to_string(cfg.replications)});
}

void cmd_coverage(const Common& c, const Values& v) {
  require_seed(c);
  CoverageConfig cfg;
  cfg.seed = c.seed;
  cfg.workers = c.workers;
  if (v.n) cfg.n = v.n;
  if (v.reps) cfg.replications = v.reps;
  cfg.t = v.t;
  if (v.h > 0.0) cfg.h = v.h;
  cfg.alpha = v.alpha;
  cfg.u = v.point;
  cfg.s = v.s;
  const auto r = run_coverage(cfg);
  if (!r.in_window)
    std::cerr << "warning: h = n^-" << format_double(r.zeta) << " with t = n^" << format_double(r.gamma)
              << " is outside the undersmoothing window\n";
  emit_table(c, {"n", "t", "h", "coverage"},
             {{std::to_string(cfg.n), std::to_string(cfg.t), format_double(cfg.h), format_double(r.coverage)}},
             {"replications: " + std::to_string(r.replications)});
}

void cmd_bernstein_check(const Common& c, const Values& v) {
  const DensitySpec p = DensitySpec::parse(v.density);
  const KernelSpec k = make_kernel(c);
  const auto ts = io::parse_int_list(v.t_grid);
  const auto hs = io::parse_real_list(v.h_grid);
  const auto us = io::parse_real_list(v.u_grid);
  for (auto t : ts)
    if (t < 1) throw UsageError("--t-grid values must be >= 1");
  for (double h : hs)
    if (!(h > 0.0)) throw UsageError("--h-grid values must be positive");
  for (double u : us)
    if (!(u > 0.0 && u < 1.0)) throw UsageError("--u-grid values must lie in (0, 1)");
  if (!(v.safety >= 1.0)) throw UsageError("--safety must be >= 1");
  const SmoothnessParams sp = p.grid_smoothness(v.safety);

  struct Row {
    std::int64_t t;
    double h, u, err, bound, qr, qr_bound, bias, bias_bound;
  };
  std::vector<Row> rows;
  for (auto t : ts)
    for (double h : hs)
      for (double u : us) rows.push_back({t, h, u, 0, 0, 0, 0, 0, 0});
  parallel_for(rows.size(), [&](std::size_t i) {
    Row& r = rows[i];
    const RealFn f = scaled_kernel(k, r.h, r.u);
    const auto br = scaled_kernel_breaks(r.h, r.u);
    const std::vector<std::int64_t> trials{r.t};
    r.err = bernstein_error_exact(f, p, r.t, br);
    r.bound = lemma1_bound(f, p, sp, trials, br);
    r.qr = quasi_riemann_error(f, p, r.t, br);
    r.qr_bound = proposition3_bound(static_cast<double>(r.t), r.h, sp, k.bounds());
    r.bias = exact_kde_expectation(p, trials, k, r.h, r.u) - p.pdf(r.u);
    r.bias_bound = theorem1_bias_bound(sp, k, trials, r.h, r.u);
  });
  std::vector<std::vector<std::string>> out;
  for (const auto& r : rows) {
    const bool pass = std::fabs(r.err) <= r.bound && r.qr <= r.qr_bound &&
                      std::fabs(r.bias) <= r.bias_bound;
    out.push_back({p.name(), std::to_string(r.t), format_double(r.h), format_double(r.u),
                   format_double(r.err), format_double(r.bound),
                   format_double(r.bound > 0 ? std::fabs(r.err) / r.bound : 0.0),
                   format_double(r.qr), format_double(r.qr_bound), format_double(r.bias),
                   format_double(r.bias_bound), pass ? "true" : "false"});
  }
  emit_table(c,
             {"density", "t", "h", "u", "exact_error", "bound", "ratio", "qr_error", "qr_bound",
              "bias", "bias_bound", "pass"},
             out,
             {"kernel: " + k.name(), "L: " + format_double(sp.L), "alpha: " + format_double(sp.alpha),
              "p_max: " + format_double(sp.p_max), "s: " + format_double(sp.s)});
}

bool is_option_token(const std::string& a, const std::string& name) {
  return a == "--" + name || a.rfind("--" + name + "=", 0) == 0;
}

// Expands --config FILE into --key=value tokens placed before the explicit
// flags, so flags on the command line take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (!is_option_token(args[i], "config")) continue;
    std::string path;
    std::size_t span = 1;
    if (args[i].size() > 8 && args[i][8] == '=') {
      path = args[i].substr(9);
    } else if (i + 1 < args.size()) {
      path = args[i + 1];
      span = 2;
    } else {
      return args;  // let the parser report the missing value
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + span));
    std::vector<std::string> injected;
    for (const auto& [key, value] : io::read_config(path)) injected.push_back("--" + key + "=" + value);
    // after the subcommand name
    std::size_t at = 1;
    while (at < args.size() && args[at].rfind("-", 0) == 0) ++at;
    at = std::min(at + 1, args.size());
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
    break;
  }
  return args;
}

std::vector<std::string> recorded_flags(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 2; i < args.size(); ++i) {
    const std::string& a = args[i];
    bool skip = false;
    for (const char* name : {"out", "workers"}) {
      if (a == std::string("--") + name) {
        skip = true;
        ++i;
      } else if (is_option_token(a, name)) {
        skip = true;
      }
    }
    if (!skip) out.push_back(a);
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(args);
  } catch (const DataError& e) {
    return fail(2, "data", e.what());
  }

  CLI::App app{"Binomial mixing-density estimation under heterogeneous trials"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string("binomix ") + kVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common c;
  Values v;

  auto add_common = [&](CLI::App* sub, bool kernel) {
    sub->add_option("--out", c.out, "Output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", c.workers, "Worker threads (default: all cores)");
    sub->add_option("--config", c.config, "key = value file with default flag values");
    if (kernel) {
      sub->add_option("--kernel", c.kernel, "epanechnikov or legendre")
          ->check(CLI::IsMember({"epanechnikov", "legendre"}));
      sub->add_option("--kernel-order", c.kernel_order, "Legendre kernel order (2, 4, 6, 8)");
    }
  };
  auto add_seed = [&](CLI::App* sub) { return sub->add_option("--seed", c.seed, "Random seed"); };

  auto* est = app.add_subcommand("estimate", "Kernel density estimate from empirical proportions");
  add_common(est, true);
  est->add_option("--input", v.input, "CSV with successes,trials")->required();
  est->add_option("--h", v.h, "Bandwidth")->required();
  est->add_option("--grid", v.grid, "Evaluation points a:b:step or a comma list");
  est->add_option("--point", v.point, "Single evaluation point");
  est->add_flag("--clamp-nonneg", v.clamp, "Report negative estimates as 0");

  auto* ci = app.add_subcommand("ci", "Undersmoothed confidence intervals");
  add_common(ci, true);
  ci->add_option("--input", v.input)->required();
  ci->add_option("--h", v.h)->required();
  ci->add_option("--grid", v.grid);
  ci->add_option("--point", v.point);
  ci->add_option("--alpha", v.alpha, "1 - confidence level");

  auto* lep = app.add_subcommand("lepski", "Bandwidth selection with bootstrap critical values");
  add_common(lep, true);
  lep->add_option("--input", v.input)->required();
  lep->add_option("--grid", v.grid, "Bandwidths: comma list or geom:start:ratio:count");
  lep->add_option("--alpha", v.alpha);
  lep->add_option("--boot-reps", v.boot_reps);
  lep->add_option("--point", v.point);
  auto* lep_seed = add_seed(lep);

  auto* diff = app.add_subcommand("diff", "Two-group density difference");
  add_common(diff, true);
  diff->add_option("--input", v.input, "successes,trials,group or value,group")->required();
  diff->add_option("--mode", v.mode, "true or binomial");
  diff->add_option("--tune", v.tune, "joint, separate or fixed");
  diff->add_option("--h", v.h, "Bandwidth for --tune fixed");
  diff->add_option("--grid-h", v.grid_h);
  diff->add_option("--grid-order", v.grid_order);
  diff->add_option("--grid", v.grid);
  diff->add_option("--point", v.point);
  diff->add_option("--eps", v.eps, "Positivity margin for the group share");
  auto* diff_seed = add_seed(diff);

  auto* s1 = app.add_subcommand("sim1", "Heterogeneous versus clipped trials");
  add_common(s1, false);
  s1->add_option("--n", v.n);
  s1->add_option("--targets", v.targets, "Target harmonic means");
  s1->add_option("--reps", v.reps);
  s1->add_option("--h", v.h, "Bandwidth (default n^-1/5)");
  s1->add_option("--point", v.point);
  auto* s1_seed = add_seed(s1);

  auto* s2 = app.add_subcommand("sim2", "Joint versus separate tuning of the density difference");
  add_common(s2, false);
  s2->add_option("--n-list", v.n_list);
  s2->add_option("--reps", v.reps);
  s2->add_option("--grid-h", v.grid_h);
  s2->add_option("--grid-order", v.grid_order);
  s2->add_option("--point", v.point);
  s2->add_option("--eps", v.eps);
  auto* s2_seed = add_seed(s2);

  auto* cov = app.add_subcommand("coverage", "Coverage of undersmoothed intervals");
  add_common(cov, false);
  cov->add_option("--n", v.n);
  cov->add_option("--t", v.t);
  cov->add_option("--h", v.h);
  cov->add_option("--reps", v.reps);
  cov->add_option("--alpha", v.alpha);
  cov->add_option("--point", v.point);
  cov->add_option("--s", v.s, "Smoothness for the bandwidth window check");
  auto* cov_seed = add_seed(cov);

  auto* bc = app.add_subcommand("bernstein-check", "Exact errors against the closed-form bounds");
  add_common(bc, true);
  bc->add_option("--density", v.density, "beta:a,b | uniform | nonsmooth");
  bc->add_option("--t-grid", v.t_grid);
  bc->add_option("--h-grid", v.h_grid);
  bc->add_option("--u-grid", v.u_grid);
  bc->add_option("--safety", v.safety, "Safety factor on grid constants");

  std::vector<const char*> cargv;
  for (const auto& a : args) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(1, "usage", e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  c.recorded = recorded_flags(args);
  for (auto* opt : {lep_seed, diff_seed, s1_seed, s2_seed, cov_seed})
    if (opt->count() > 0) c.seeded = true;
  if (c.workers > 0) set_default_workers(c.workers);
  if (sub == lep && sub->get_option("--format")->count() == 0) c.format = "json";

  try {
    if (sub == est) cmd_estimate(c, v);
    else if (sub == ci) cmd_ci(c, v);
    else if (sub == lep) cmd_lepski(c, v);
    else if (sub == diff) cmd_diff(c, v);
    else if (sub == s1) cmd_sim1(c, v);
    else if (sub == s2) cmd_sim2(c, v);
    else if (sub == cov) cmd_coverage(c, v);
    else if (sub == bc) cmd_bernstein_check(c, v);
  } catch (const DataError& e) {
    return fail(2, "data", e.what());
  } catch (const NumericalError& e) {
    return fail(3, "numerical", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(1, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(3, "numerical", e.what());
  }
  return 0;
}

}  // namespace binomix
