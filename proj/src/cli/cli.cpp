#include "nilgeom/cli/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nilgeom/check/properties.hpp"
#include "nilgeom/hybrid/simulator.hpp"
#include "nilgeom/sdg/report.hpp"
#include "nilgeom/weil/expression.hpp"

namespace nilgeom::cli {

namespace {

constexpr const char* kSpecGrammar = R"txt(Spec strings:
  spec    = factor { "x" factor } ;
  factor  = "D" [ "_" int ] [ "(" int ")" ]     D_k(n), D(n) = D_1(n), D = D_1(1)
          | "(" "D_" int ")" "^" int             (D_k)^n
          | "Dinf(" int "," int ")" ;           truncated D_inf(n) at order K
Expressions:
  expr    = term { ("+" | "-") term } ;
  term    = unary { ("*" | "·") unary } ;
  unary   = [ "-" ] power ;
  power   = atom [ "^" int ] ;
  atom    = int | generator | "(" expr ")" ;
  generator: x (one generator) or x1 .. xn)txt";

// Signals an input problem discovered after option parsing.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<double> parse_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw InputError(fmt::format("{}: '{}' is not a number", what, item));
    }
    out.push_back(v);
  }
  if (out.empty()) throw InputError(fmt::format("{}: empty list", what));
  return out;
}

// "e2" is the third basis vector; otherwise a comma list.
std::vector<double> parse_vector(const std::string& text, std::size_t n, const char* what) {
  if (text.size() >= 2 && text[0] == 'e' && std::isdigit(static_cast<unsigned char>(text[1]))) {
    const auto idx = static_cast<std::size_t>(std::stoul(text.substr(1)));
    if (idx >= n) throw InputError(fmt::format("{}: {} out of range for dimension {}", what, text, n));
    std::vector<double> v(n, 0.0);
    v[idx] = 1.0;
    return v;
  }
  auto v = parse_numbers(text, what);
  if (v.size() != n) {
    throw InputError(fmt::format("{}: expected {} components, got {}", what, n, v.size()));
  }
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write {}", path.string()));
  f << content;
  if (!f) throw InputError(fmt::format("failed writing {}", path.string()));
}

struct CurvatureArgs {
  std::string chart = "sphere2";
  std::size_t dim = 2;
  double radius = 1.0;
  std::vector<std::string> points;
  std::string t1 = "e0", t2 = "e1", t3 = "e0";
  bool fd = false;
  std::optional<double> tol;
  std::string format = "json";
  std::string out;
};

int cmd_curvature(const CurvatureArgs& a, std::ostream& out, std::ostream& err) {
  const auto chart = manifold::catalog(a.chart, {.dim = a.dim, .radius = a.radius})
                         .with_mode(a.fd ? manifold::DerivativeMode::kFiniteDifference
                                         : manifold::DerivativeMode::kClosedForm);
  const std::size_t n = chart.dim();
  std::vector<manifold::Point> points;
  for (const auto& p : a.points) {
    auto x = parse_numbers(p, "--point");
    if (x.size() != n) {
      throw InputError(fmt::format("--point: {} has {} coordinates, chart needs {}", p, x.size(), n));
    }
    points.push_back(std::move(x));
  }
  const auto t1 = parse_vector(a.t1, n, "--t1");
  const auto t2 = parse_vector(a.t2, n, "--t2");
  const auto t3 = parse_vector(a.t3, n, "--t3");
  const auto report = sdg::compare_curvature(chart, points, t1, t2, t3);
  const std::string body = a.format == "csv" ? sdg::to_csv(report) : sdg::to_json(report).dump(2) + "\n";
  const double tol = a.tol.value_or(a.fd ? 1e-3 : 1e-6);
  if (a.out.empty()) {
    out << body;
  } else {
    write_file(a.out, body);
    out << fmt::format("wrote {} ({} points, max rel_err {:.3g})\n", a.out, points.size(),
                       report.max_rel_err());
  }
  if (!(report.max_rel_err() <= tol)) {
    err << fmt::format("tolerance exceeded: max rel_err {:.6g} > {:.3g}\n", report.max_rel_err(), tol);
    return kCheckFailed;
  }
  return kOk;
}

int cmd_algebra(const std::string& spec_text, const std::string& expr, std::ostream& out) {
  const auto spec = weil::parse_spec(spec_text);
  const auto value = weil::parse_expression(spec, expr);
  out << weil::to_string(value) << "\n";
  out << "augmentation: " << weil::ScalarTraits<weil::Rational>::to_string(value.augmentation()) << "\n";
  return kOk;
}

struct SimulateArgs {
  hybrid::HybridConfig cfg;
  std::string tau = "-2:2";
  std::string format = "csv";
  std::string out_dir;
};

int cmd_simulate(SimulateArgs a, std::ostream& out) {
  const auto colon = a.tau.find(':');
  if (colon == std::string::npos) throw InputError("--tau: expected a:b");
  a.cfg.tau_min = parse_numbers(a.tau.substr(0, colon), "--tau").at(0);
  a.cfg.tau_max = parse_numbers(a.tau.substr(colon + 1), "--tau").at(0);
  hybrid::validate(a.cfg);
  std::filesystem::path dir = a.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("NILGEOM_OUTPUT_DIR");
    dir = env && *env ? env : ".";
  }
  const auto result = hybrid::simulate(a.cfg);
  const auto timeline = dir / (a.format == "json" ? "timeline.json" : "timeline.csv");
  write_file(timeline, a.format == "json" ? hybrid::timeline_json(result, a.cfg).dump(2) + "\n"
                                          : hybrid::timeline_csv(result.timeline));
  const auto atlas = dir / "atlas.json";
  write_file(atlas, hybrid::to_json(result.atlas).dump(2) + "\n");
  long g = 0;
  for (const auto& s : result.timeline) g += s.regime == hybrid::Regime::kG;
  out << fmt::format("wrote {} and {} ({} samples, {} in G)\n", timeline.string(), atlas.string(),
                     result.timeline.size(), g);
  return kOk;
}

int cmd_selftest(const std::vector<std::string>& suites, const check::Options& opt, std::ostream& out,
                 std::ostream& err) {
  const auto& names = suites.empty() ? check::suite_names() : suites;
  std::vector<std::string> failing;
  for (const auto& name : names) {
    const auto suite = check::run_suite(name, opt);
    out << fmt::format("[{}] {}: {} properties, {} cases, {} failures\n", suite.passed() ? "PASS" : "FAIL",
                       suite.name, suite.outcomes.size(), suite.cases(), suite.failures());
    for (const auto& o : suite.outcomes) {
      out << fmt::format("    {:<4} {:<32} {:>8} cases  {}\n", o.passed() ? "ok" : "FAIL", o.name, o.cases,
                         o.summary);
      if (!o.passed()) {
        failing.push_back(suite.name + "/" + o.name);
        for (const auto& note : o.notes) out << "         " << note << "\n";
      }
    }
  }
  if (!failing.empty()) {
    err << fmt::format("selftest failed: {}\n", fmt::join(failing, ", "));
    return kCheckFailed;
  }
  out << "all suites passed\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic differential geometry toolkit: Weil algebras, infinitesimal holonomy and "
               "curvature, and a hybrid SET/G simulator.",
               "nilgeom"};
  app.set_version_flag("--version", std::string("nilgeom ") + NILGEOM_VERSION);
  app.require_subcommand(1);

  CurvatureArgs ca;
  auto* curv = app.add_subcommand("curvature", "Compare holonomy curvature with the classical Riemann tensor");
  curv->add_option("--chart", ca.chart, "Chart name")
      ->check(CLI::IsMember({"euclidean", "sphere2", "sphere3"}))
      ->capture_default_str();
  curv->add_option("--dim", ca.dim, "Dimension of the euclidean chart")->capture_default_str();
  curv->add_option("--radius", ca.radius, "Sphere radius")->capture_default_str();
  curv->add_option("--point", ca.points, "Comma-separated chart coordinates (repeatable)")->required();
  curv->add_option("--t1", ca.t1, "First tangent vector, e<i> or a comma list")->capture_default_str();
  curv->add_option("--t2", ca.t2, "Second tangent vector")->capture_default_str();
  curv->add_option("--t3", ca.t3, "Transported vector")->capture_default_str();
  curv->add_flag("--fd", ca.fd, "Christoffel symbols by finite differences of the metric");
  curv->add_option("--tol", ca.tol, "Relative tolerance [default: 1e-6, or 1e-3 with --fd]");
  curv->add_option("--format", ca.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  curv->add_option("--out", ca.out, "Report file [default: standard output]");

  std::string spec_text, expr;
  auto* alg = app.add_subcommand("algebra", "Reduce an expression in a Weil algebra");
  alg->add_option("--spec", spec_text, "Infinitesimal object, e.g. D(2), D_3(1), (D_2)^2")->required();
  alg->add_option("--expr", expr, "Polynomial in the generators")->required();
  alg->footer(kSpecGrammar);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run the hybrid SET/G shrinking-universe simulator");
  // --h is the threshold, so help is long-form only here.
  sim->set_help_flag("--help", "Print this help message and exit");
  sim->add_option("--h", sa.cfg.h, "Regime threshold h")->capture_default_str();
  sim->add_option("--tau", sa.tau, "Time range a:b")->capture_default_str();
  sim->add_option("--steps", sa.cfg.steps, "Number of samples, endpoints included")->capture_default_str();
  sim->add_option("--order-k", sa.cfg.order_k, "Order k of D_k(m) in the G regime")->capture_default_str();
  sim->add_option("--m", sa.cfg.m, "Dimension m of D_k(m), 4..8")->capture_default_str();
  sim->add_option("--profile", sa.cfg.shrink_profile, "Scale profile rho(tau): abs or quadratic")
      ->capture_default_str();
  sim->add_option("--eps1", sa.cfg.epsilon1, "Upper margin of the G patch [default: h/10]");
  sim->add_option("--eps2", sa.cfg.epsilon2, "Lower margin of the SET patch [default: h/10]");
  sim->add_option("--format", sa.format, "Timeline format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sim->add_option("--out-dir", sa.out_dir,
                  "Output directory [default: $NILGEOM_OUTPUT_DIR, else the current directory]");

  std::vector<std::string> suites;
  check::Options opt;
  std::string fault;
  auto* self = app.add_subcommand("selftest", "Run the randomized invariant suites");
  self->add_option("--suite", suites, "Suite to run (repeatable) [default: all]")
      ->check(CLI::IsMember(check::suite_names()));
  self->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  self->add_option("--inject-fault", fault)->check(CLI::IsMember({"sign"}))->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*curv) return cmd_curvature(ca, out, err);
    if (*alg) return cmd_algebra(spec_text, expr, out);
    if (*sim) return cmd_simulate(sa, out);
    opt.sign_fault = fault == "sign";
    return cmd_selftest(suites, opt, out, err);
  } catch (const weil::ExpressionError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kBadInput;
}

}  // namespace nilgeom::cli
