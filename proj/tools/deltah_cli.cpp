// deltah: evaluate delta-neutral H and G functions, dump coefficients, run the identity checks.

#include <deltah/deltah.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace deltah;
using nlohmann::json;

namespace {

enum exit_code { ok = 0, verification_failed = 1, bad_input = 2, not_neutral = 3 };

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Grid {
  double start = 0, stop = 0;
  int count = 0;
  std::vector<double> points() const {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
    return v;
  }
};

Grid parse_grid(const std::string& s) {
  Grid g;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> g.start >> c1 >> g.stop >> c2 >> g.count) || c1 != ':' || c2 != ':' || !in.eof())
    throw usage_error("--grid expects start:stop:count, got '" + s + "'");
  if (!(g.start < g.stop) || g.count < 1) throw usage_error("--grid needs start < stop and count >= 1");
  return g;
}

//! 17 significant digits; integral values keep a trailing ".0"
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

ParameterSet load_params(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw usage_error("cannot open " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw usage_error(std::string("invalid JSON: ") + e.what());
  }
  ParameterSet ps;
  try {
    ps.A = j.at("A").get<std::vector<double>>();
    ps.a = j.at("a").get<std::vector<double>>();
    ps.B = j.at("B").get<std::vector<double>>();
    ps.b = j.at("b").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw usage_error(std::string("parameter file needs numeric arrays A, a, B, b: ") + e.what());
  }
  validate(ps);
  return ps;
}

long max_nodes_from_env() {
  if (const char* v = std::getenv("DELTAH_MAX_NODES")) {
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (end == v || *end || n < 1000) throw usage_error("DELTAH_MAX_NODES must be an integer >= 1000");
    return n;
  }
  return default_max_nodes;
}

template <class F>
void parallel_for(std::size_t n, F body) {
  const std::size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  for (auto& t : pool) t.join();
}

struct Config {
  std::string params, grid, output = "csv", route = "auto", table;
  double theta = 0, tolerance = 1e-6;
  int nmax = 40;
  bool nmax_given = false;
  unsigned seed = 1;
};

int run_eval(const Config& cfg) {
  const auto ps = load_params(cfg.params);
  if (cfg.grid.empty()) throw usage_error("eval needs --grid");
  const auto xs = parse_grid(cfg.grid).points();
  HOptions opts;
  opts.contour.max_nodes = max_nodes_from_env();
  opts.series.theta = cfg.theta;
  opts.series.n_max = cfg.nmax_given ? cfg.nmax : 600;
  const HFunction h(ps, opts);
  const double rho = h.constants().rho;

  struct Row {
    EvaluationResult r;
    std::string error;
  };
  std::vector<Row> rows(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    try {
      if (x > 0 && x > rho) rows[i].r = {0, 0, Method::compact_support, 0};
      else if (cfg.route == "contour") rows[i].r = eval_contour(ps, x, opts.contour);
      else if (cfg.route == "series") rows[i].r = h.series().at(x / rho);
      else rows[i].r = h(x);
    } catch (const error& e) {
      rows[i].error = e.what();
    }
  });

  if (cfg.output == "json") {
    json out = json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      json row = {{"x", xs[i]}};
      if (rows[i].error.empty()) {
        row["value"] = rows[i].r.value;
        row["error_estimate"] = rows[i].r.abs_error_estimate;
        row["method"] = to_string(rows[i].r.method);
      } else {
        row["value"] = nullptr;
        row["error"] = rows[i].error;
      }
      out.push_back(row);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "x,value,error_estimate,method\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (rows[i].error.empty())
        std::cout << num(xs[i]) << "," << num(rows[i].r.value) << "," << num(rows[i].r.abs_error_estimate) << ","
                  << to_string(rows[i].r.method) << "\n";
      else
        std::cout << num(xs[i]) << ",nan,nan,error\n";
    }
  }
  for (auto& r : rows)
    if (!r.error.empty()) std::cerr << "deltah: " << r.error << "\n";
  return ok;
}

int run_coeffs(const Config& cfg) {
  const auto ps = load_params(cfg.params);
  const int n = cfg.nmax;
  const auto d = derive(ps);
  // a_n through the Noerlund form is undefined at Gamma poles; the Stirling form always works
  const auto tab = build_table(ps, cfg.theta, n);
  std::vector<std::pair<std::string, std::vector<double>>> cols = {
      {"q", tab.q}, {"l", tab.l}, {"c", tab.c}, {"a_n", tab.a_coeffs}};
  if (cfg.table == "g") {
    if (!d.is_g_case) throw usage_error("the g table exists for G parameters only");
    cols = {{"g", compute_g(ps.a, ps.b, int(ps.p()) - 1, n).g_scaled}};
    for (int i = 0; i <= n; ++i) cols[0].second[i] *= std::tgamma(i + 1.0);
  } else if (!cfg.table.empty()) {
    const auto it = std::find_if(cols.begin(), cols.end(), [&](auto& c) { return c.first == cfg.table; });
    if (it == cols.end()) throw usage_error("--table must be one of q, l, c, a_n, g");
    cols = {*it};
  }
  const std::string route = cfg.table == "g" ? "noerlund_sum" : cfg.table == "a_n" ? "stirling" : "recurrence";

  if (cfg.output == "json") {
    json out;
    for (auto& [name, v] : cols) out[name] = v;
    out["theta"] = cfg.theta;
    std::cout << out.dump(2) << "\n";
    return ok;
  }
  if (cols.size() == 1) {
    std::cout << "index,value,route\n";
    for (int i = 0; i <= n; ++i) std::cout << i << "," << num(cols[0].second[i]) << "," << route << "\n";
    return ok;
  }
  std::cout << "index,q,l,c,a_n\n";
  for (int i = 0; i <= n; ++i) {
    std::cout << i;
    for (auto& c : cols) std::cout << "," << num(c.second[i]);
    std::cout << "\n";
  }
  return ok;
}

int run_table(const Config& cfg) {
  const auto ps = load_params(cfg.params);
  const auto d = derive(ps);
  if (cfg.output == "json") {
    std::cout << json{{"p", ps.p()},        {"q", ps.q()},   {"delta", d.delta},
                      {"mu", d.mu},          {"rho", d.rho},  {"nu", d.nu},
                      {"gamma", d.gamma_pole}, {"g_case", d.is_g_case}}
                     .dump(2)
              << "\n";
    return ok;
  }
  std::cout << "| quantity | value |\n|---|---|\n"
            << "| p | " << ps.p() << " |\n| q | " << ps.q() << " |\n"
            << "| Delta | " << num(d.delta) << " |\n| mu | " << num(d.mu) << " |\n| rho | " << num(d.rho)
            << " |\n| nu | " << num(d.nu) << " |\n| gamma | " << num(d.gamma_pole) << " |\n"
            << "| G case | " << (d.is_g_case ? "yes" : "no") << " |\n";
  return ok;
}

json to_json(const VerificationReport& r) {
  return {{"identity_id", r.identity_id},
          {"parameter_set", {{"A", r.parameter_set.A}, {"a", r.parameter_set.a}, {"B", r.parameter_set.B}, {"b", r.parameter_set.b}}},
          {"sample_points", r.sample_points},
          {"residuals", r.residuals},
          {"max_residual", r.max_residual},
          {"max_rel_residual", r.max_rel_residual},
          {"tolerance", r.tolerance},
          {"relative", r.relative},
          {"passed", r.passed},
          {"runtime_ms", r.runtime_ms},
          {"notes", r.notes}};
}

// five random delta-neutral sets, l_r by three routes
VerificationReport random_l_routes(unsigned seed, double tol) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(1, 3);
  std::uniform_real_distribution<double> w(0.5, 2.0), sh(0.0, 1.5);
  auto r = detail::make_report("l_routes_random");
  r.tolerance = tol;
  r.relative = true;
  detail::report_timer timer;
  for (int k = 0; k < 5; ++k) {
    ParameterSet ps;
    const int p = len(rng), q = len(rng);
    for (int i = 0; i < p; ++i) ps.A.push_back(w(rng)), ps.a.push_back(sh(rng));
    for (int j = 0; j < q; ++j) ps.B.push_back(w(rng)), ps.b.push_back(sh(rng));
    double sa = 0, sb = 0;
    for (double v : ps.A) sa += v;
    for (double v : ps.B) sb += v;
    for (double& v : ps.B) v *= sa / sb;
    double sbb = 0;
    for (double v : ps.B) sbb += v;
    ps.B.back() += sa - sbb;
    const auto l = compute_l(ps, 10);
    for (int i = 0; i <= 10; ++i)
      for (double other : {compute_l_explicit(ps, i), compute_l_nair(ps, i)}) {
        r.sample_points.push_back(i);
        r.residuals.push_back(std::abs(l[i] - other));
        r.references.push_back(std::max(std::abs(l[i]), std::abs(other)));
      }
  }
  r.notes = "seed " + std::to_string(seed) + ", r <= 10";
  return detail::finish(r, timer);
}

int run_verify(const Config& cfg) {
  const auto ps = load_params(cfg.params);
  const auto d = derive(ps);
  const double tol = cfg.tolerance;
  std::vector<double> s_grid{1, 2, 3};
  if (!cfg.grid.empty()) s_grid = parse_grid(cfg.grid).points();
  const bool nonneg = std::all_of(ps.a.begin(), ps.a.end(), [](double v) { return v >= 0; }) &&
                      std::all_of(ps.b.begin(), ps.b.end(), [](double v) { return v >= 0; });
  const bool int_mu = d.mu == std::floor(d.mu);
  const std::vector<double> t_grid{0.2, 0.5, 0.8};
  auto scaled = [&](const std::vector<double>& t) {
    std::vector<double> x;
    for (double v : t) x.push_back(v * d.rho);
    return x;
  };

  std::vector<VerificationReport> reports;
  reports.push_back(random_l_routes(cfg.seed, std::min(tol, 1e-9)));
  if (int_mu && d.mu <= 0 && d.mu >= -2) reports.push_back(verify_mellin_negative_mu(ps, s_grid, tol));
  if (d.is_g_case && int_mu && d.mu <= 0) {
    reports.push_back(verify_noerlund_mellin(ps.a, ps.b, s_grid, tol));
    reports.push_back(verify_q_k_independence(ps.a, ps.b, s_grid, std::min(tol, 1e-10)));
    reports.push_back(verify_q_polynomial(ps.a, ps.b, s_grid, std::min(tol, 1e-9)));
  }
  if (d.mu >= 0) {
    const std::vector<double> x{1, 2, 5};
    reports.push_back(verify_bernstein(ps, Axis::mellin_x, x, tol));
    if (d.rho <= 1) reports.push_back(verify_bernstein(ps, Axis::laplace_t, x, tol));
  }
  if (d.mu == 0 && nonneg) {
    auto w = verify_weak_limit_moments(ps, {0.02, 0.01, 0.005}, std::min(cfg.nmax, 3), tol, -1);
    reports.insert(reports.end(), w.begin(), w.end());
  }
  if (d.mu >= 0 && nonneg && d.rho <= 1)
    reports.push_back(verify_integral_equation(ps, scaled(t_grid), d.mu == 0 ? MuCase::zero : MuCase::positive, tol));
  if (d.is_g_case && nonneg && d.mu >= 0) {
    reports.push_back(verify_digamma_identity(ps.a, ps.b, t_grid, d.mu == 0 ? MuCase::zero : MuCase::positive, tol));
    reports.push_back(verify_digamma_contour(ps.a, ps.b, {0.6}, std::max(tol, 1e-5)));
    if (d.mu > 0) reports.push_back(verify_final_expansion(ps.a, ps.b, t_grid, tol));
  }
  if (d.is_g_case && ps.p() == 2 && d.mu > 0) {
    auto rec = reconstruct_p2_expansion(ps.a, ps.b);
    rec.notes += " (informative)";
    reports.push_back(rec);
  }

  json out = json::array();
  bool all = true;
  for (auto& r : reports) {
    out.push_back(to_json(r));
    all = all && r.passed;
  }
  std::cout << out.dump(2) << "\n";
  return all ? ok : verification_failed;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-neutral Fox H and Meijer G functions"};
  app.require_subcommand(1);
  Config cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--params", cfg.params, "JSON file with arrays A, a, B, b")->required();
    sub->add_option("--output", cfg.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--theta", cfg.theta, "free exponent of the singular expansion");
  };
  auto* eval = app.add_subcommand("eval", "H(x) on a grid, CSV x,value,error_estimate,method");
  add_common(eval);
  eval->add_option("--grid", cfg.grid, "start:stop:count")->required();
  eval->add_option("--route", cfg.route, "auto, contour or series")->check(CLI::IsMember({"auto", "contour", "series"}));
  eval->add_option("--nmax", cfg.nmax, "series terms for the series route (default 600)")->check(CLI::Range(1, 5000));

  auto* coeffs = app.add_subcommand("coeffs", "q, l, c and a_n tables");
  add_common(coeffs);
  coeffs->add_option("--nmax", cfg.nmax, "highest coefficient index")->check(CLI::Range(0, 64));
  coeffs->add_option("--table", cfg.table, "single table in index,value,route form: q, l, c, a_n or g");

  auto* verify = app.add_subcommand("verify", "identity checks as a JSON report array");
  add_common(verify);
  verify->add_option("--nmax", cfg.nmax, "highest moment order for the weak-limit check (capped at 3)")->check(CLI::Range(0, 64));
  verify->add_option("--grid", cfg.grid, "s grid for the Mellin checks, start:stop:count");
  verify->add_option("--tolerance", cfg.tolerance, "pass threshold")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "seed for the random coefficient sets");

  auto* table = app.add_subcommand("table", "derived constants as a markdown table");
  add_common(table);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : bad_input;
  }
  cfg.nmax_given = eval->count("--nmax") > 0;

  try {
    if (*eval) return run_eval(cfg);
    if (*coeffs) return run_coeffs(cfg);
    if (*verify) return run_verify(cfg);
    return run_table(cfg);
  } catch (const not_delta_neutral& e) {
    std::cerr << "deltah: " << e.what() << "\n";
    return not_neutral;
  } catch (const usage_error& e) {
    std::cerr << "deltah: " << e.what() << "\n";
    return bad_input;
  } catch (const invalid_parameters& e) {
    std::cerr << "deltah: " << e.what() << "\n";
    return bad_input;
  } catch (const std::exception& e) {
    std::cerr << "deltah: " << e.what() << "\n";
    return verification_failed;
  }
}
