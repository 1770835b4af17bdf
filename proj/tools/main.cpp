#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "detwidth/error.hpp"
#include "detwidth/fredholm.hpp"
#include "detwidth/lpp.hpp"
#include "detwidth/parallel.hpp"
#include "detwidth/structured_dets.hpp"
#include "detwidth/width.hpp"

#ifndef DETWIDTH_VERSION
#define DETWIDTH_VERSION "0.0.0"
#endif

using namespace detwidth;
using nlohmann::json;

namespace {

constexpr int kCsvSchema = 1;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::string& path, const std::vector<std::string>& header) : path_(path), out_(path) {
    if (!out_) throw cli::ConfigError("cannot write '" + path + "'");
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

struct Run {
  const cli::Config& cfg;
  std::string prefix;
  json results = json::object();
  std::vector<std::string> artifacts;
  bool numeric_failure = false;

  Csv csv(const std::string& suffix, const std::vector<std::string>& header) {
    const std::string path = prefix + suffix + ".csv";
    artifacts.push_back(path);
    return Csv(path, header);
  }
  SeedSpec seed() const {
    return {static_cast<std::uint64_t>(cfg.integer("seed")),
            static_cast<std::uint64_t>(cfg.integer("stream"))};
  }
};

std::size_t positive(const cli::Config& cfg, const std::string& key) {
  const long v = cfg.integer(key);
  if (v <= 0) throw cli::ConfigError("config key '" + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

WeightSymbol parse_symbol(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "constant") return WeightSymbol::constant(Support::circle, arg.empty() ? 1.0 : std::stod(arg));
    if (kind == "exp_cosh") return WeightSymbol::exp_cosh(std::stod(arg));
    if (kind == "binom") return WeightSymbol::binom(std::stoi(arg));
  } catch (const std::invalid_argument&) {
  }
  throw cli::ConfigError("bad symbol '" + spec + "' (constant:c, exp_cosh:t or binom:t)");
}

// ---- verify-toeplitz ----

void verify_toeplitz(Run& run) {
  const auto& cfg = run.cfg;
  const double eps = cfg.real("eps");
  const double tol = cfg.real("tol");
  const auto ns = cfg.integers("n");
  const bool auto_m = cfg.str("m") == "auto";
  auto out = run.csv("", {"f", "n", "m", "lhs", "rhs", "relative_residual", "status"});
  double worst = 0.0;
  std::size_t rows = 0, skipped = 0, errors = 0;
  for (const auto& spec : cfg.items("f")) {
    const WeightSymbol f = parse_symbol(spec);
    for (long nl : ns) {
      if (nl <= 0) throw cli::ConfigError("config key 'n' must hold positive integers");
      const auto n = static_cast<std::size_t>(nl);
      std::vector<long> ms;
      if (auto_m) {
        for (long m = nl + 1; m <= 2 * nl + 4; ++m) ms.push_back(m);
      } else {
        ms = cfg.integers("m");
      }
      const std::size_t qm = suggested_circle_order(f, n);
      const OrthoBasis basis = build_circle_basis(f, n, qm);
      const cplx cont = continuous_toeplitz(f, n, qm).value;
      for (long ml : ms) {
        if (ml <= 0) throw cli::ConfigError("config key 'm' must hold positive integers");
        const auto m = static_cast<std::size_t>(ml);
        ++rows;
        if (n > m) {
          // fewer nodes than the size: the discrete determinant vanishes
          out.row({spec, std::to_string(n), std::to_string(m), "0", "", "", "skipped"});
          ++skipped;
          continue;
        }
        try {
          const double lhs =
              discrete_toeplitz(f, DiscreteNodeSet::roots_of_unity(m), n).value.real();
          const double rhs = (cont * circle_fredholm_det(f, VWeight::power(m), basis, n, eps).value).real();
          const double r = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
          worst = std::max(worst, r);
          out.row({spec, std::to_string(n), std::to_string(m), num(lhs), num(rhs), num(r),
                   r < tol ? "ok" : "fail"});
        } catch (const Error& e) {
          ++errors;
          out.row({spec, std::to_string(n), std::to_string(m), "", "", "", std::string("error: ") + e.what()});
        }
      }
    }
  }
  run.numeric_failure = worst >= tol || errors > 0;
  run.results = {{"rows", rows}, {"skipped", skipped}, {"errors", errors}, {"max_residual", worst}};
}

// ---- verify-hankel ----

void verify_hankel(Run& run) {
  const auto& cfg = run.cfg;
  const double nw = cfg.real("n_weight"), d = cfg.real("d"), delta = cfg.real("delta");
  const double tol = cfg.real("tol");
  if (!(nw > 0.0) || !(d > 0.0) || !(delta > 0.0))
    throw cli::ConfigError("n_weight, d and delta must be positive");
  const auto gauss = WeightSymbol::gaussian(nw);
  const auto f = gauss.scaled(1.0 / d);
  const auto b = WeightSymbol::constant(Support::line, d);
  auto out = run.csv("", {"n", "s", "lhs", "rhs", "relative_residual", "err_estimate", "status"});
  double worst = 0.0;
  std::size_t errors = 0;
  for (long nl : cfg.integers("n")) {
    if (nl <= 0) throw cli::ConfigError("config key 'n' must hold positive integers");
    const auto n = static_cast<std::size_t>(nl);
    const auto basis = build_line_basis(f.with_factor(b), n, 0.0, 0);
    const double cont = continuous_hankel(gauss, n, 0.0, 200).value.real();
    for (double s : cfg.reals("s")) {
      try {
        const double lhs = std::pow(d, -double(n)) *
                           discrete_hankel(gauss, hankel_lattice(gauss, d, s, n), n).value.real();
        const auto res = strip_fredholm_det(f, b, VWeight::sine(d, s), basis, n, delta);
        const double rhs = cont * res.value.real();
        const double r = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
        worst = std::max(worst, r);
        out.row({std::to_string(n), num(s), num(lhs), num(rhs), num(r), num(res.err_estimate),
                 r < tol ? "ok" : "fail"});
      } catch (const Error& e) {
        ++errors;
        out.row({std::to_string(n), num(s), "", "", "", "", std::string("error: ") + e.what()});
      }
    }
  }
  run.numeric_failure = worst >= tol || errors > 0;
  run.results = {{"errors", errors}, {"max_residual", worst}};
}

// ---- width ----

void width(Run& run) {
  const auto& cfg = run.cfg;
  const std::string process = cfg.str("process");
  const std::size_t n = positive(cfg, "n");
  const long s_quad = cfg.integer("s_quad");
  if (s_quad < 0) throw cli::ConfigError("config key 's_quad' must be nonnegative");
  ProcessSpec spec;
  if (process == "brownian_bridge") {
    spec = ProcessSpec::brownian_bridge(n);
  } else if (process == "ct_ssrw") {
    spec = ProcessSpec::ct_ssrw(n, cfg.real("T"));
  } else if (process == "dt_ssrw") {
    const double T = cfg.real("T");
    if (T != std::floor(T) || T < 1) throw cli::ConfigError("dt_ssrw needs a positive integer T");
    spec = ProcessSpec::dt_ssrw(n, static_cast<int>(T));
  } else {
    throw cli::ConfigError("config key 'process' must be brownian_bridge, ct_ssrw or dt_ssrw");
  }

  // value and a refinement estimate from a second node count
  auto evaluate = [&](double M) -> std::pair<WidthResult, double> {
    switch (spec.kind) {
      case ProcessSpec::Kind::brownian_bridge: {
        const std::size_t q = s_quad > 0 ? static_cast<std::size_t>(s_quad) : 32;
        const auto a = width_cdf_bb(n, M, q);
        const auto b = width_cdf_bb(n, M, q >= 16 ? q / 2 : 2 * q);
        return {a, std::abs(a.raw - b.raw)};
      }
      case ProcessSpec::Kind::ct_ssrw: {
        const auto Mi = static_cast<std::size_t>(M);
        if (Mi < n) return {width_cdf_ct(n, spec.T, Mi), 0.0};
        const std::size_t q = s_quad > 0 ? s_quad : default_s_quad_ct(n, spec.T, Mi);
        const auto a = width_cdf_ct(n, spec.T, Mi, q);
        return {a, std::abs(a.raw - width_cdf_ct(n, spec.T, Mi, 2 * q).raw)};
      }
      case ProcessSpec::Kind::dt_ssrw: {
        const auto Mi = static_cast<std::size_t>(M);
        const int T = static_cast<int>(spec.T);
        if (Mi < n) return {width_cdf_dt(n, T, Mi), 0.0};
        const std::size_t q = s_quad > 0 ? s_quad : default_s_quad_dt(n, T, Mi);
        const auto a = width_cdf_dt(n, T, Mi, q);
        return {a, std::abs(a.raw - width_cdf_dt(n, T, Mi, 2 * q).raw)};
      }
    }
    return {};
  };

  // an explicit M list wins over the default scaled grid
  const bool scaled = cfg.str("M").empty() && !cfg.str("x").empty();
  const bool discrete = spec.kind != ProcessSpec::Kind::brownian_bridge;
  std::vector<std::string> header{"M", "cdf", "raw", "err_estimate"};
  if (scaled) header = {"x", "threshold", "M", "cdf", "raw", "err_estimate", "F", "abs_diff"};
  header.push_back("flag");
  auto out = run.csv("", header);

  std::vector<double> grid = scaled ? cfg.reals("x") : cfg.reals("M");
  if (grid.empty()) throw cli::ConfigError("width needs a non-empty 'M' or 'x' list");
  const ScalingLaw law = scaling_law(spec);
  double prev = -1.0, prev_arg = -INFINITY, worst_diff = 0.0;
  std::size_t warnings = 0, errors = 0;
  for (double g : grid) {
    double threshold = g, M = g;
    if (scaled) {
      threshold = law.center + law.scale * g;
      M = threshold;
      // walks: P(W < M) resp. P(W < 2M) with integer M nearest the threshold
      if (spec.kind == ProcessSpec::Kind::ct_ssrw) M = std::max(1.0, std::round(threshold));
      if (spec.kind == ProcessSpec::Kind::dt_ssrw) M = std::max(1.0, std::round(threshold / 2.0));
    } else if (discrete && (M != std::floor(M) || M < 1)) {
      throw cli::ConfigError("walk widths need positive integer M values");
    }
    std::vector<std::string> row;
    if (scaled) row = {num(g), num(threshold)};
    row.push_back(num(M));
    try {
      const auto [r, err] = evaluate(M);
      std::string flag = r.clamped ? "clamped" : "ok";
      if (g > prev_arg && r.value < prev - 1e-9) {
        flag = "warning: non-monotone";
        ++warnings;
      }
      prev = r.value;
      prev_arg = g;
      row.insert(row.end(), {num(r.value), num(r.raw), num(err)});
      if (scaled) {
        const double F = tracy_widom_F(g);
        worst_diff = std::max(worst_diff, std::abs(r.value - F));
        row.insert(row.end(), {num(F), num(std::abs(r.value - F))});
      }
      row.push_back(flag);
    } catch (const Error& e) {
      ++errors;
      row.insert(row.end(), {"", "", ""});
      if (scaled) row.insert(row.end(), {"", ""});
      row.push_back(std::string("error: ") + e.what());
    }
    out.row(row);
  }
  run.results = {{"process", process},    {"rows", grid.size()},   {"warnings", warnings},
                 {"errors", errors},      {"center", law.center},  {"scale", law.scale},
                 {"regime", law.regime}};
  if (scaled) run.results["max_abs_diff_to_F"] = worst_diff;
}

// ---- tw-table ----

void tw_table(Run& run) {
  const auto& cfg = run.cfg;
  const double lo = cfg.real("x_lo"), hi = cfg.real("x_hi"), step = cfg.real("x_step");
  const double tol = cfg.real("tol");
  if (!(step > 0.0) || hi < lo) throw cli::ConfigError("tw-table needs x_lo <= x_hi and x_step > 0");
  const auto order = positive(cfg, "order");
  auto out = run.csv("", {"x", "F_airy", "F_contour", "abs_diff"});
  double worst = 0.0, prev = -1.0;
  bool monotone = true;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = lo + step * static_cast<double>(k);
    const double a = tracy_widom_F(x, order);
    const double c = limiting_kernel_det(x);
    worst = std::max(worst, std::abs(a - c));
    monotone = monotone && a >= prev;
    prev = a;
    out.row({num(x), num(a), num(c), num(std::abs(a - c))});
  }
  run.numeric_failure = worst >= tol || !monotone;
  run.results = {{"rows", count}, {"max_abs_diff", worst}, {"monotone", monotone}};
}

// ---- lpp ----

void require_lpp_size(std::size_t n, std::size_t samples) {
  if (n < 8) throw cli::ConfigError("finite-size too small: n must be at least 8");
  if (samples < 1000) throw cli::ConfigError("samples must be at least 1000");
}

json constants_json(const LppConstants& c) {
  return {{"mu", c.mu}, {"sigma", c.sigma}, {"d", c.d}};
}

void write_lpp_tables(Run& run, const LppStats& st) {
  auto table = run.csv("", {"x", "empirical", "F", "abs_diff"});
  for (std::size_t i = 0; i < st.table.x.size(); ++i)
    table.row({num(st.table.x[i]), num(st.table.empirical[i]), num(st.table.reference[i]),
               num(std::abs(st.table.empirical[i] - st.table.reference[i]))});
  if (run.cfg.flag("write_samples")) {
    auto samples = run.csv("_samples", {"index", "value"});
    for (std::size_t k = 0; k < st.samples.size(); ++k)
      samples.row({std::to_string(k), num(st.samples[k])});
  }
}

void lpp_tw(Run& run) {
  const auto& cfg = run.cfg;
  const std::size_t n = positive(cfg, "n"), samples = positive(cfg, "samples");
  require_lpp_size(n, samples);
  const double tol = cfg.real("ks_tol");
  const auto st = tw_convergence_test(n, cfg.real("q"), samples, run.seed());
  write_lpp_tables(run, st);
  run.numeric_failure = st.ks_distance >= tol;
  run.results = {{"ks_distance", st.ks_distance}, {"constants", constants_json(st.constants)},
                 {"samples", samples}};
}

void lpp_identity(Run& run) {
  const auto& cfg = run.cfg;
  const std::size_t n = positive(cfg, "n"), samples = positive(cfg, "samples");
  require_lpp_size(n, samples);
  const double alpha = cfg.real("alpha"), beta = cfg.real("beta"), q = cfg.real("q");
  CutScan scan;
  const std::string window = cfg.str("window");
  if (window == "default") {
    scan.window_tau = default_cut_window(alpha, n, q);
  } else if (window != "full") {
    scan.window_tau = cfg.real("window");
  }
  scan.corner_only = cfg.flag("corner_only");
  const auto st = airy_sum_identity_test(alpha, beta, n, q, samples, run.seed(), scan);
  write_lpp_tables(run, st);
  run.numeric_failure = st.ks_distance >= cfg.real("ks_tol");
  run.results = {{"ks_distance", st.ks_distance},
                 {"constants", constants_json(st.constants)},
                 {"samples", samples},
                 {"rounding", "floor"},
                 {"alpha_n", st.alpha_n},
                 {"beta_n", st.beta_n},
                 {"N", st.alpha_n + st.beta_n},
                 {"scan_halfwidth", st.scan_halfwidth},
                 {"window_tau", scan.window_tau ? json(*scan.window_tau) : json("full")}};
}

// ---- poisson-check ----

void poisson(Run& run) {
  const auto& cfg = run.cfg;
  const std::size_t count = positive(cfg, "count");
  const long h_max = cfg.integer("h_max");
  const double tol = cfg.real("tol");
  const double M_lo = cfg.real("M_lo"), M_hi = cfg.real("M_hi");
  if (!(M_lo > 0.0) || M_hi < M_lo) throw cli::ConfigError("poisson-check needs 0 < M_lo <= M_hi");
  CounterRng rng(run.seed());
  auto out = run.csv("", {"x", "theta", "M", "direct_re", "direct_im", "dual_re", "dual_im", "abs_diff"});
  double worst = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    const double x = 6.0 * rng.uniform() - 3.0;
    const double theta = 8.0 * rng.uniform() - 4.0;
    const double M = M_lo + (M_hi - M_lo) * rng.uniform();
    const auto [a, b] = poisson_check(x, theta, M, static_cast<int>(h_max));
    worst = std::max(worst, std::abs(a - b));
    out.row({num(x), num(theta), num(M), num(a.real()), num(a.imag()), num(b.real()),
             num(b.imag()), num(std::abs(a - b))});
  }
  run.numeric_failure = worst >= tol;
  run.results = {{"triples", count}, {"max_abs_diff", worst}};
}

struct Command {
  cli::Schema schema;
  std::string help;
  std::function<void(Run&)> body;
};

std::vector<Command> commands() {
  return {
      {{"verify-toeplitz",
        {{"f", "constant:1,exp_cosh:0.5,exp_cosh:2"}, {"n", "2..6"}, {"m", "auto"},
         {"eps", "0.2"}, {"tol", "1e-7"}}},
       "Discrete Toeplitz determinant against the circle Fredholm form", verify_toeplitz},
      {{"verify-hankel",
        {{"n_weight", "3"}, {"d", "1.7"}, {"n", "2,3,4"}, {"s", "0,0.3,0.5"}, {"delta", "0.5"},
         {"tol", "1e-6"}}},
       "Gaussian lattice Hankel determinant against the strip Fredholm form", verify_hankel},
      {{"width",
        {{"process", "brownian_bridge"}, {"n", "8"}, {"T", "1"}, {"M", ""}, {"x", "-2,-1,0,1,2"},
         {"s_quad", "0"}}},
       "Width CDF of non-intersecting paths (M list, or scaled x list)", width},
      {{"tw-table", {{"x_lo", "-5"}, {"x_hi", "2"}, {"x_step", "0.5"}, {"order", "60"}, {"tol", "1e-4"}}},
       "Tracy-Widom F by the Airy kernel and by the contour kernel", tw_table},
      {{"lpp-tw",
        {{"n", "100"}, {"q", "0.25"}, {"samples", "10000"}, {"ks_tol", "0.05"},
         {"write_samples", "false"}}},
       "Normalized last-passage times against F", lpp_tw},
      {{"lpp-identity",
        {{"alpha", "1"}, {"beta", "1"}, {"n", "100"}, {"q", "0.25"}, {"samples", "10000"},
         {"window", "default"}, {"corner_only", "false"}, {"ks_tol", "0.08"},
         {"write_samples", "false"}}},
       "Maximum over the cut of two independent passage-time profiles against F", lpp_identity},
      {{"poisson-check",
        {{"count", "100"}, {"h_max", "200"}, {"M_lo", "0.5"}, {"M_hi", "3.5"}, {"tol", "1e-10"}}},
       "Both sides of the Gaussian Poisson summation identity", poisson},
  };
}

}  // namespace

int main(int argc, char** argv) {
  const auto cmds = commands();
  std::vector<cli::Schema> schemas;
  for (const auto& c : cmds) schemas.push_back(c.schema);

  CLI::App app{"Discrete and continuous determinant identities, path widths and last passage"};
  app.set_version_flag("--version", DETWIDTH_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key = value file with [sections], or a run manifest");

  std::vector<cli::KeyMap> flag_values(cmds.size());
  std::vector<CLI::App*> subs;
  const cli::KeyMap common = cli::common_defaults();
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    CLI::App* sub = app.add_subcommand(cmds[i].schema.name, cmds[i].help);
    cli::KeyMap keys = common;
    keys.insert(cmds[i].schema.defaults.begin(), cmds[i].schema.defaults.end());
    for (const auto& [k, def] : keys)
      sub->add_option("--" + k, flag_values[i][k], "default: " + (def.empty() ? "(none)" : def));
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const Command& cmd = cmds[which];

  cli::KeyMap resolved = common;
  resolved.insert(cmd.schema.defaults.begin(), cmd.schema.defaults.end());
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (!config_path.empty())
      for (const auto& [k, v] : cli::load_config_file(config_path, cmd.schema.name, schemas))
        resolved[k] = v;
    for (const auto& [k, v] : flag_values[which])
      if (subs[which]->count("--" + k) > 0) resolved[k] = v;
    if (resolved["output"].empty()) resolved["output"] = cmd.schema.name;

    const cli::Config cfg(resolved);
    const long threads = cfg.integer("threads");
    if (threads < 0) throw cli::ConfigError("config key 'threads' must be nonnegative");
    if (threads > 0) setenv("DETWIDTH_THREADS", std::to_string(threads).c_str(), 1);

    Run run{cfg, cfg.str("output"), json::object(), {}, false};
    cmd.body(run);

    json manifest;
    manifest["subcommand"] = cmd.schema.name;
    manifest["version"] = DETWIDTH_VERSION;
    manifest["csv_schema"] = kCsvSchema;
    manifest["config"] = resolved;
    manifest["seed"] = {{"master", cfg.integer("seed")}, {"stream", cfg.integer("stream")}};
    manifest["threads"] = default_thread_count();
    manifest["wall_clock_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["results"] = run.results;
    manifest["artifacts"] = run.artifacts;
    manifest["status"] = run.numeric_failure ? "failed tolerance" : "ok";
    const std::string path = run.prefix + ".json";
    std::ofstream out(path);
    if (!out) throw cli::ConfigError("cannot write '" + path + "'");
    out << manifest.dump(2) << '\n';
    std::cout << manifest["results"].dump() << '\n';
    if (run.numeric_failure) {
      std::cerr << cmd.schema.name << ": result outside tolerance\n";
      return 1;
    }
    return 0;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
