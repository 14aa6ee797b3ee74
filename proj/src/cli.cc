// Copyright 2026 The DPJE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpje/cli.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpje/accountant.h"
#include "dpje/bench.h"
#include "dpje/dpje.h"
#include "dpje/errors.h"
#include "dpje/exact_je.h"
#include "dpje/lipschitz.h"
#include "dpje/polytope.h"

namespace dpje {
namespace {

using nlohmann::json;

constexpr char kSchema[] = "dpje/1";

json ToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json ToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(ToJson(Eigen::VectorXd(m.row(i).transpose())));
  }
  return rows;
}

json ToJson(const TailBound& t) {
  return {{"delta", t.delta}, {"log_delta", t.log_delta}, {"lambda", t.lambda}};
}

json ToJson(const Calibration& c) {
  return {{"sigma", c.sigma},
          {"beta", c.beta},
          {"gamma", c.gamma},
          {"epsilon_limit", c.epsilon_limit},
          {"in_range", c.in_range},
          {"oracle", ToJson(c.oracle)},
          {"closed_form", ToJson(c.closed_form)},
          {"verified", c.verified}};
}

// Accepts "1e3,2000,4e3".
std::vector<std::int64_t> ParseList(const std::string& text) {
  std::vector<std::int64_t> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    double value = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    const auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || end != last || !(value >= 1.0) ||
        value != std::floor(value)) {
      throw ParseError("'" + item + "' is not a positive integer");
    }
    values.push_back(static_cast<std::int64_t>(value));
  }
  if (values.empty()) throw ParseError("empty list");
  return values;
}

Polytope LoadInput(const std::string& path, const std::string& format) {
  MatrixFormat f = FormatForPath(path);
  if (format == "csv") f = MatrixFormat::kCsv;
  if (format == "whitespace") f = MatrixFormat::kWhitespace;
  return LoadPolytope(path, f);
}

void Emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file) throw ParseError("cannot write '" + path + "'");
  file << doc.dump(2) << '\n';
}

struct ComputeArgs {
  std::string input, format = "auto", out, trace;
  bool diagnostics = false;
  RunConfig cfg;
};

struct ExactArgs {
  std::string input, format = "auto", out, trace;
  int iterations = 0;
  double xi = 0.1;
  double delta0 = 0.05;
  double tol = 1e-2;
};

struct CalibrateArgs {
  PrivacySpec spec;
  double sigma = 0.0;
  bool no_range_check = false;
  std::string out;
};

struct AuditArgs {
  std::string input, format = "auto", out, grid = "default", lambdas;
  bool moments = false;
  double eps0 = 0.0;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  AccountantConstants constants;
};

struct BenchArgs {
  std::string n_list = "1e3,2e3,4e3", t_list, out;
  std::int64_t d = 20;
  double xi = 0.2;
  int repeats = 3;
  int iterations = 50;
  std::uint64_t seed = 0;
};

int CmdCompute(ComputeArgs& a, std::ostream& out, std::ostream& err) {
  const Polytope p = LoadInput(a.input, a.format);
  RunConfig& cfg = a.cfg;
  cfg.keep_trace = a.diagnostics || !a.trace.empty();
  const EllipsoidResult res = Run(p, cfg);
  const DerivedParams& params = res.params;

  json doc = {{"schema", kSchema},
              {"command", "compute"},
              {"n", p.rows()},
              {"d", p.cols()},
              {"xi", cfg.xi},
              {"seed", cfg.seed},
              {"T", params.iterations},
              {"s", params.s},
              {"N", params.n_target},
              {"xi0", params.xi0},
              {"private", cfg.privacy},
              {"sigma", params.sigma},
              {"v", ToJson(res.v)},
              {"Q", ToJson(res.q)},
              {"max_h", res.certificate.max_h},
              {"sum_v", res.certificate.sum_v},
              {"target", res.certificate.target},
              {"certificate_ok", res.certificate.ok},
              {"clamped", res.clamped},
              {"resamples", res.resamples},
              {"seconds", res.seconds}};
  if (cfg.privacy) {
    doc["epsilon"] = cfg.epsilon;
    doc["delta"] = cfg.delta;
    doc["eps0"] = cfg.eps0;
    doc["L"] = params.lipschitz;
    doc["beta"] = params.beta;
    doc["privacy"] = ToJson(*params.calibration);
  } else {
    doc["epsilon"] = nullptr;
    doc["delta"] = nullptr;
  }
  if (res.telescope) {
    const TelescopeTerms& t = *res.telescope;
    doc["telescope"] = {{"holds", t.holds},
                        {"max_excess", t.max_excess},
                        {"phi", ToJson(t.phi)},
                        {"ideal", ToJson(t.ideal)},
                        {"log_n_over_d", t.log_n_over_d(0)},
                        {"sampling", ToJson(t.sampling)},
                        {"sketch", ToJson(t.sketch)},
                        {"noise", ToJson(t.noise)}};
  }
  if (!a.trace.empty()) {
    std::ofstream file(a.trace);
    if (!file) throw ParseError("cannot write '" + a.trace + "'");
    WriteTraceCsv(file, res.trace->iterates);
  }
  Emit(doc, a.out, out);

  err << "compute: max_h=" << res.certificate.max_h
      << " target=" << res.certificate.target << " sum_v=" << res.certificate.sum_v
      << " T=" << params.iterations << (res.certificate.ok ? " ok" : " FAILED")
      << '\n';
  if (res.telescope && !res.telescope->holds) {
    err << "compute: telescoping bound violated by " << res.telescope->max_excess
        << '\n';
  }
  return res.certificate.ok ? kExitOk : kExitCheckFailed;
}

int CmdExact(const ExactArgs& a, std::ostream& out, std::ostream& err) {
  const Polytope p = LoadInput(a.input, a.format);
  const int iterations =
      a.iterations > 0 ? a.iterations
                       : ConvergenceIterations(a.xi, p.rows(), p.cols(), a.delta0);
  const ExactResult res = ExactIterate(p, iterations, !a.trace.empty());
  const double d = static_cast<double>(p.cols());
  const WeightVector v = NormalizeToSum(res.u, d);
  const Eigen::MatrixXd q = Gram(p, v);
  const double max_h = QuadraticForms(p.matrix(), q).maxCoeff();
  const OptimalityCertificate kkt = CheckOptimality(p, res.last, a.tol);

  json doc = {{"schema", kSchema},
              {"command", "exact"},
              {"n", p.rows()},
              {"d", p.cols()},
              {"T", iterations},
              {"u", ToJson(res.u)},
              {"v", ToJson(v)},
              {"last", ToJson(res.last)},
              {"Q", ToJson(q)},
              {"max_h", max_h},
              {"sum_v", v.sum()},
              {"dual_objective", DualObjective(p, res.last)},
              {"clamped", res.clamped},
              {"optimality",
               {{"tol", a.tol},
                {"active_residual", kkt.active_residual},
                {"inactive_residual", kkt.inactive_residual},
                {"active_rows", kkt.active_rows},
                {"optimal", kkt.optimal}}}};
  if (!a.trace.empty()) {
    std::ofstream file(a.trace);
    if (!file) throw ParseError("cannot write '" + a.trace + "'");
    WriteTraceCsv(file, res.trace);
  }
  Emit(doc, a.out, out);
  err << "exact: max_h=" << max_h << " residual=" << kkt.active_residual
      << " T=" << iterations << (kkt.optimal ? " optimal" : " NOT optimal") << '\n';
  return kkt.optimal ? kExitOk : kExitCheckFailed;
}

int CmdCalibrate(CalibrateArgs& a, std::ostream& out, std::ostream& err) {
  a.spec.enforce_range = !a.no_range_check;
  const Calibration cal =
      a.sigma > 0.0 ? VerifySigma(a.spec, a.sigma) : CalibrateSigma(a.spec);
  json doc = ToJson(cal);
  doc["schema"] = kSchema;
  doc["command"] = "calibrate";
  doc["epsilon"] = a.spec.epsilon;
  doc["delta"] = a.spec.delta;
  doc["T"] = a.spec.steps;
  Emit(doc, a.out, out);
  err << "calibrate: sigma=" << cal.sigma << " delta'=" << cal.oracle.delta
      << (cal.verified ? " verified" : " NOT verified") << '\n';
  return cal.verified ? kExitOk : kExitCheckFailed;
}

int CmdAudit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
  if (a.moments) {
    if (a.grid != "default") throw DomainError("unknown grid '" + a.grid + "'");
    std::vector<std::int64_t> extra;
    if (!a.lambdas.empty()) extra = ParseList(a.lambdas);
    const MomentGridReport report = ValidateMomentGrid(a.constants, extra);
    double worst = 0.0;
    json points = json::array();
    for (const MomentGridPoint& pt : report.points) {
      worst = std::max(worst, pt.oracle / pt.bound);
      points.push_back({{"beta", pt.beta}, {"sigma", pt.sigma}, {"lambda", pt.lambda},
                        {"bound", pt.bound}, {"oracle", pt.oracle}});
    }
    Emit({{"schema", kSchema},
          {"command", "audit"},
          {"kind", "moments"},
          {"points", points},
          {"violations", report.violations},
          {"max_oracle_over_bound", worst}},
         a.out, out);
    err << "audit: " << report.points.size() << " grid points, "
        << report.violations << " violations\n";
    return report.violations == 0 ? kExitOk : kExitCheckFailed;
  }
  if (a.input.empty()) throw ParseError("audit needs --input or --moments");
  if (!(a.eps0 > 0.0)) throw DomainError("audit needs --eps0 > 0");
  const Polytope p = LoadInput(a.input, a.format);
  const AuditReport report = AuditLipschitz(p, a.eps0, a.trials, a.seed, a.threads);
  Emit({{"schema", kSchema},
        {"command", "audit"},
        {"kind", "lipschitz"},
        {"eps0", a.eps0},
        {"L", report.lipschitz},
        {"max_ratio", report.max_ratio},
        {"max_ratio_over_bound", report.max_ratio_over_bound},
        {"trials", report.trials},
        {"violations", report.violations}},
       a.out, out);
  err << "audit: L=" << report.lipschitz << " max_ratio=" << report.max_ratio
      << " violations=" << report.violations << '\n';
  return report.violations == 0 ? kExitOk : kExitCheckFailed;
}

int CmdBench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<BenchPoint> by_n, by_t;
  for (std::int64_t n : ParseList(a.n_list)) {
    by_n.push_back(TimeRun(n, a.d, a.iterations, a.xi, a.repeats, a.seed));
  }
  const ScalingCheck n_check = CheckNScaling(by_n);
  ScalingCheck t_check;
  if (!a.t_list.empty()) {
    const std::int64_t n = by_n.back().n;
    for (std::int64_t t : ParseList(a.t_list)) {
      by_t.push_back(TimeRun(n, a.d, static_cast<int>(t), a.xi, a.repeats, a.seed));
    }
    t_check = CheckTScaling(by_t);
  }
  std::vector<BenchPoint> all = by_n;
  all.insert(all.end(), by_t.begin(), by_t.end());
  if (a.out.empty()) {
    WriteBenchCsv(out, all);
  } else {
    std::ofstream file(a.out);
    if (!file) throw ParseError("cannot write '" + a.out + "'");
    WriteBenchCsv(file, all);
  }
  err << "bench: n-scaling " << n_check.worst_ratio << " of allowance"
      << (n_check.ok ? " ok" : " FAILED");
  if (!by_t.empty()) {
    err << ", T-linearity " << t_check.worst_ratio << " of allowance"
        << (t_check.ok ? " ok" : " FAILED");
  }
  err << '\n';
  return n_check.ok && t_check.ok ? kExitOk : kExitCheckFailed;
}

void AddSeed(CLI::App* app, std::uint64_t& seed) {
  app->add_option("--seed", seed, "Random seed")->envname("DPJE_SEED");
}

void AddConstants(CLI::App* app, AccountantConstants& k) {
  app->add_option("--c0", k.c0, "Second-order moment constant");
  app->add_option("--c1", k.c1, "Admissible epsilon range constant");
  app->add_option("--c2", k.c2, "Sigma calibration constant");
  app->add_option("--c3", k.c3, "Third-order moment constant");
}

}  // namespace

std::vector<std::string> ExpandConfig(const std::vector<std::string>& args) {
  std::vector<std::string> result;
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
      continue;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      continue;
    }
    if (args[i].rfind("--", 0) == 0) given.insert(args[i].substr(2, args[i].find('=') - 2));
    result.push_back(args[i]);
  }
  if (path.empty()) return result;
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open config '" + path + "'");
  std::string line;
  int line_number = 0;
  while (std::getline(file, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_number) +
                       ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || given.count(key)) continue;
    if (value == "true") {
      result.push_back("--" + key);
    } else if (value != "false") {
      result.push_back("--" + key);
      result.push_back(value);
    }
  }
  return result;
}

int RunCli(const std::vector<std::string>& raw_args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Approximate John ellipsoids of symmetric polytopes, optionally "
               "with differential privacy.", "dpje");
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Run the randomized iteration");
  c->add_option("--input", compute.input, "Constraint matrix (CSV or whitespace)")
      ->required();
  c->add_option("--format", compute.format, "auto, csv or whitespace");
  c->add_option("--xi", compute.cfg.xi, "Target accuracy");
  c->add_option("--delta0", compute.cfg.delta0, "Failure probability");
  c->add_option("--delta1", compute.cfg.delta1, "Sampling failure probability");
  AddSeed(c, compute.cfg.seed);
  c->add_flag("--private", compute.cfg.privacy, "Add truncated Gaussian noise");
  c->add_option("--eps", compute.cfg.epsilon, "Privacy budget epsilon");
  c->add_option("--delta", compute.cfg.delta, "Privacy budget delta");
  c->add_option("--eps0", compute.cfg.eps0, "Neighbor closeness");
  c->add_option("--L", compute.cfg.lipschitz, "Lipschitz constant (default: derived)");
  AddConstants(c, compute.cfg.constants);
  c->add_flag("!--range-check,--no-range-check", compute.cfg.enforce_budget_range,
              "Accept epsilon outside the analysed range");
  c->add_option("--iters", compute.cfg.iterations, "Override T");
  c->add_option("--s", compute.cfg.s, "Override sketch rows");
  c->add_option("--xi0", compute.cfg.xi0, "Override sampling accuracy");
  c->add_option("--N", compute.cfg.n_target, "Override sample target");
  c->add_option("--sigma", compute.cfg.sigma, "Override noise scale");
  c->add_flag("--stub-sampling", compute.cfg.stub_sampling, "Use D = I");
  c->add_flag("--stub-sketch", compute.cfg.stub_sketch, "Use the isometry sketch");
  c->add_flag("--diagnostics", compute.diagnostics, "Report telescoping terms");
  c->add_option("--trace", compute.trace, "Write the iterates as CSV");
  c->add_option("--out", compute.out, "Write JSON here instead of stdout");
  c->add_option("--threads", compute.cfg.threads, "Worker cap")->check(CLI::PositiveNumber);

  ExactArgs exact;
  auto* e = app.add_subcommand("exact", "Run the deterministic fixed-point iteration");
  e->add_option("--input", exact.input, "Constraint matrix")->required();
  e->add_option("--format", exact.format, "auto, csv or whitespace");
  e->add_option("--iters", exact.iterations, "Iterations (default: derived from xi)");
  e->add_option("--xi", exact.xi, "Accuracy used to derive T");
  e->add_option("--delta0", exact.delta0, "Failure probability used to derive T");
  e->add_option("--tol", exact.tol, "Optimality tolerance");
  e->add_option("--trace", exact.trace, "Write the iterates as CSV");
  e->add_option("--out", exact.out, "Write JSON here instead of stdout");

  CalibrateArgs calibrate;
  auto* k = app.add_subcommand("calibrate", "Calibrate the noise scale");
  k->add_option("--eps", calibrate.spec.epsilon, "Privacy budget epsilon")->required();
  k->add_option("--delta", calibrate.spec.delta, "Privacy budget delta")->required();
  k->add_option("--eps0", calibrate.spec.eps0, "Neighbor closeness")->required();
  k->add_option("--L", calibrate.spec.lipschitz, "Lipschitz constant")->required();
  k->add_option("--iters", calibrate.spec.steps, "Iterations T")->required();
  k->add_option("--sigma", calibrate.sigma, "Verify this sigma instead");
  AddConstants(k, calibrate.spec.constants);
  k->add_flag("--no-range-check", calibrate.no_range_check,
              "Accept epsilon outside the analysed range");
  k->add_option("--out", calibrate.out, "Write JSON here instead of stdout");

  AuditArgs audit;
  auto* u = app.add_subcommand("audit", "Audit the Lipschitz or moment bounds");
  u->add_option("--input", audit.input, "Constraint matrix");
  u->add_option("--format", audit.format, "auto, csv or whitespace");
  u->add_option("--eps0", audit.eps0, "Neighbor closeness");
  u->add_option("--trials", audit.trials, "Perturbation trials");
  AddSeed(u, audit.seed);
  u->add_flag("--moments", audit.moments, "Check the closed-form moment bound");
  u->add_option("--grid", audit.grid, "Moment grid name");
  u->add_option("--lambdas", audit.lambdas, "Extra moment orders, comma separated");
  AddConstants(u, audit.constants);
  u->add_option("--threads", audit.threads, "Worker cap")->check(CLI::PositiveNumber);
  u->add_option("--out", audit.out, "Write JSON here instead of stdout");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Measure runtime scaling");
  b->add_option("--n-list", bench.n_list, "Row counts, comma separated");
  b->add_option("--d", bench.d, "Columns");
  b->add_option("--xi", bench.xi, "Accuracy");
  b->add_option("--repeats", bench.repeats, "Repeats per point (minimum kept)");
  b->add_option("--iters", bench.iterations, "Iterations per run");
  b->add_option("--t-list", bench.t_list, "Iteration counts for the T sweep");
  AddSeed(b, bench.seed);
  b->add_option("--out", bench.out, "Write CSV here instead of stdout");

  try {
    std::vector<std::string> args = ExpandConfig(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? kExitOk : kExitError;
  } catch (const Error& error) {
    err << error.kind() << ": " << error.what() << '\n';
    return kExitError;
  }

  try {
    if (c->parsed()) return CmdCompute(compute, out, err);
    if (e->parsed()) return CmdExact(exact, out, err);
    if (k->parsed()) return CmdCalibrate(calibrate, out, err);
    if (u->parsed()) return CmdAudit(audit, out, err);
    if (b->parsed()) return CmdBench(bench, out, err);
  } catch (const BudgetError& error) {
    err << error.kind() << ": " << error.what() << '\n';
    return kExitCheckFailed;
  } catch (const InfeasibleError& error) {
    err << error.kind() << ": " << error.what() << '\n';
    return kExitCheckFailed;
  } catch (const Error& error) {
    err << error.kind() << ": " << error.what() << '\n';
    return kExitError;
  } catch (const std::exception& error) {
    err << "Error: " << error.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace dpje
