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

#include "dpje/dpje.h"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <sstream>

#include "dpje/errors.h"
#include "dpje/exact_je.h"
#include "dpje/lipschitz.h"
#include "dpje/noise.h"
#include "dpje/parallel.h"
#include "dpje/random.h"
#include "dpje/sketch_sample.h"

namespace dpje {
namespace {

// Derived iteration counts above this are refused rather than run.
constexpr double kMaxIterations = 1e8;

void ValidateConfig(const RunConfig& cfg) {
  std::ostringstream msg;
  if (!(cfg.xi > 0.0 && cfg.xi <= 0.8)) msg << "xi must lie in (0, 0.8]; ";
  if (!(cfg.delta0 > 0.0 && cfg.delta0 < 1.0)) msg << "delta0 must lie in (0, 1); ";
  if (!(cfg.delta1 > 0.0 && cfg.delta1 < 1.0)) msg << "delta1 must lie in (0, 1); ";
  if (cfg.s < 0 || cfg.iterations < 0 || cfg.xi0 < 0.0 || cfg.n_target < 0.0 ||
      cfg.sigma < 0.0) {
    msg << "overrides must be non-negative; ";
  }
  const std::string problems = msg.str();
  if (!problems.empty()) throw DomainError(problems.substr(0, problems.size() - 2));
}

std::int64_t ClampToFloor(WeightVector& w) {
  std::int64_t clamped = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < kWeightFloor) {
      w(i) = kWeightFloor;
      ++clamped;
    }
  }
  return clamped;
}

Eigen::VectorXd RandomUnitVector(Stream& stream, Eigen::Index d) {
  Eigen::VectorXd u(d);
  do {
    for (Eigen::Index j = 0; j < d; ++j) u(j) = stream.Normal();
  } while (u.norm() == 0.0);
  return u / u.norm();
}

}  // namespace

double PrivateIterations(double xi, Eigen::Index n, double delta0, double beta) {
  return std::ceil(16.0 / (xi * xi) *
                   (std::log(static_cast<double>(n) / delta0) + 1.0 / (beta * beta)));
}

DerivedParams DeriveParams(const Polytope& p, const RunConfig& cfg) {
  ValidateConfig(cfg);
  DerivedParams params;
  params.s = cfg.s > 0 ? cfg.s : SketchRows(cfg.xi);
  params.xi0 = cfg.xi0 > 0.0 ? cfg.xi0 : cfg.xi / 8.0;
  params.n_target = cfg.n_target > 0.0
                        ? cfg.n_target
                        : SampleTarget(params.xi0, p.rows(), p.cols(), cfg.delta1);
  if (!cfg.privacy) {
    params.iterations = cfg.iterations > 0
                            ? cfg.iterations
                            : ConvergenceIterations(cfg.xi, p.rows(), p.cols(),
                                                    cfg.delta0);
    return params;
  }

  params.lipschitz = cfg.lipschitz > 0.0
                         ? cfg.lipschitz
                         : ComputeLipschitzBound(p, cfg.eps0).lipschitz;
  params.beta = params.lipschitz * cfg.eps0;
  if (cfg.iterations > 0) {
    params.iterations = cfg.iterations;
  } else {
    const double t = PrivateIterations(cfg.xi, p.rows(), cfg.delta0, params.beta);
    if (!(t <= kMaxIterations)) {
      std::ostringstream msg;
      msg << "derived iteration count " << t << " for L eps0 = " << params.beta
          << " is impractical; supply an iteration override";
      throw BudgetError(msg.str());
    }
    params.iterations = static_cast<int>(t);
  }

  PrivacySpec spec;
  spec.epsilon = cfg.epsilon;
  spec.delta = cfg.delta;
  spec.eps0 = cfg.eps0;
  spec.lipschitz = params.lipschitz;
  spec.steps = params.iterations;
  spec.constants = cfg.constants;
  spec.enforce_range = cfg.enforce_budget_range;
  params.calibration =
      cfg.sigma > 0.0 ? VerifySigma(spec, cfg.sigma) : CalibrateSigma(spec);
  params.sigma = params.calibration->sigma;
  return params;
}

EllipsoidResult Run(const Polytope& p, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  EllipsoidResult res;
  res.params = DeriveParams(p, cfg);
  const DerivedParams& params = res.params;
  const Eigen::Index n = p.rows();
  const Eigen::Index d = p.cols();
  const int iterations = params.iterations;
  const NoiseSpec noise{0.0, cfg.privacy ? params.sigma : 1.0};
  const Eigen::MatrixXd isometry = IsometrySketch(d);

  Trace trace;
  WeightVector w = WeightVector::Constant(n, static_cast<double>(d) / n);
  WeightVector sum = WeightVector::Zero(n);
  // The diagnostic run takes one extra step to obtain w_{T+1}.
  for (int k = 1; k <= iterations; ++k) {
    sum += w;
    if (cfg.keep_trace) trace.iterates.push_back(w);
    if (k == iterations && !cfg.keep_trace) break;

    const auto step = static_cast<std::uint64_t>(k);
    const Eigen::MatrixXd b = w.cwiseSqrt().asDiagonal() * p.matrix();
    SampleSpec sample;
    sample.n_target = params.n_target;
    sample.delta1 = cfg.delta1;
    sample.xi0 = params.xi0;
    sample.seed = cfg.seed;
    sample.iteration = step;
    sample.force_full = cfg.stub_sampling;
    const SamplingMatrix dm = SampleRows(b, sample);
    if (dm.resampled) ++res.resamples;
    const Eigen::MatrixXd sketch =
        cfg.stub_sketch ? isometry : DrawSketch({params.s, cfg.seed, step}, d);

    WeightVector next = SketchedWeights(b, dm, sketch);
    StepRecord record;
    if (cfg.keep_trace) record.sketched = next;
    if (cfg.privacy) {
      ParallelFor(0, n, cfg.threads, [&](std::int64_t i) {
        next(i) *= 1.0 + SampleKeyed(noise, cfg.seed, step, static_cast<std::uint64_t>(i));
      });
    }
    res.clamped += ClampToFloor(next);
    if (cfg.keep_trace) {
      record.ideal = QuadraticForms(b, Gram(b, WeightVector::Ones(n)));
      record.sampled = QuadraticForms(b, SampledGram(b, dm));
      record.next = next;
      trace.steps.push_back(std::move(record));
    }
    w = std::move(next);
  }
  if (cfg.keep_trace) trace.iterates.push_back(w);

  const WeightVector u = sum / static_cast<double>(iterations);
  res.v = NormalizeToSum(u, static_cast<double>(d));
  res.q = Gram(p, res.v);
  res.certificate.max_h = QuadraticForms(p.matrix(), res.q).maxCoeff();
  res.certificate.sum_v = res.v.sum();
  res.certificate.target = (1.0 + cfg.xi) * (1.0 + cfg.xi);
  res.certificate.ok = res.certificate.max_h <= res.certificate.target;
  if (cfg.keep_trace) {
    res.telescope = Telescope(p, trace);
    res.trace = std::move(trace);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
  return res;
}

TelescopeTerms Telescope(const Polytope& p, const Trace& trace, double slack) {
  const Eigen::Index n = p.rows();
  const std::size_t steps = trace.steps.size();
  if (steps == 0 || trace.iterates.size() != steps + 1) {
    throw TraceError("trace needs T steps and T + 1 iterates, got " +
                     std::to_string(steps) + " and " +
                     std::to_string(trace.iterates.size()));
  }
  for (const WeightVector& w : trace.iterates) {
    if (w.size() != n) throw TraceError("trace iterate has the wrong length");
  }
  for (const StepRecord& r : trace.steps) {
    if (r.ideal.size() != n || r.sampled.size() != n || r.sketched.size() != n ||
        r.next.size() != n) {
      throw TraceError("trace step is incomplete");
    }
  }
  const double t = static_cast<double>(steps);
  WeightVector u = WeightVector::Zero(n);
  for (std::size_t k = 0; k < steps; ++k) u += trace.iterates[k];
  u /= t;

  TelescopeTerms terms;
  terms.phi = Leverage(p, u).array().log();
  terms.ideal = (trace.iterates.back().array() / trace.iterates.front().array()).log() / t;
  terms.log_n_over_d = Eigen::VectorXd::Constant(
      n, std::log(static_cast<double>(n) / p.cols()) / t);
  terms.sampling = Eigen::VectorXd::Zero(n);
  terms.sketch = Eigen::VectorXd::Zero(n);
  terms.noise = Eigen::VectorXd::Zero(n);
  for (const StepRecord& r : trace.steps) {
    terms.sampling.array() += (r.ideal.array() / r.sampled.array()).log();
    terms.sketch.array() += (r.sampled.array() / r.sketched.array()).log();
    terms.noise.array() += (r.sketched.array() / r.next.array()).log();
  }
  terms.sampling /= t;
  terms.sketch /= t;
  terms.noise /= t;

  // log(w_{T+1}/w_1) telescopes exactly. log(n/d) bounds it only while
  // w_{T+1} <= 1, so the larger of the two is used.
  const Eigen::VectorXd bound = terms.ideal.cwiseMax(terms.log_n_over_d) +
                                terms.sampling + terms.sketch + terms.noise;
  terms.max_excess = (terms.phi - bound).maxCoeff();
  terms.holds = terms.max_excess <= slack;
  return terms;
}

std::vector<Eigen::VectorXd> HitAndRun(const Polytope& p, std::int64_t samples,
                                       std::uint64_t seed) {
  const Eigen::MatrixXd& a = p.matrix();
  const Eigen::Index d = p.cols();
  Stream stream(seed, StreamTag::kHitAndRun);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd ax = Eigen::VectorXd::Zero(p.rows());
  std::vector<Eigen::VectorXd> out;
  out.reserve(samples);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (Eigen::Index move = 0; move < 10 * d; ++move) {
      const Eigen::VectorXd dir = RandomUnitVector(stream, d);
      const Eigen::VectorXd ad = a * dir;
      double lo = -INFINITY, hi = INFINITY;
      for (Eigen::Index i = 0; i < ad.size(); ++i) {
        if (ad(i) == 0.0) continue;
        const double t1 = (1.0 - ax(i)) / ad(i);
        const double t2 = (-1.0 - ax(i)) / ad(i);
        lo = std::max(lo, std::min(t1, t2));
        hi = std::min(hi, std::max(t1, t2));
      }
      const double t = lo + stream.Uniform() * (hi - lo);
      x += t * dir;
      ax += t * ad;
    }
    out.push_back(x);
  }
  return out;
}

ContainmentReport ContainmentCheck(const Polytope& p, const EllipsoidResult& res,
                                   std::int64_t samples, std::uint64_t seed) {
  const double d = static_cast<double>(p.cols());
  ContainmentReport report;
  report.claimed_max_h = res.certificate.max_h;
  report.sum_v = res.v.sum();
  report.xi_prime = res.certificate.max_h - 1.0;
  if (std::abs(report.sum_v - d) > 1e-10 * d) {
    std::ostringstream msg;
    msg << "weights sum to " << report.sum_v << ", expected " << d;
    report.issues.push_back(msg.str());
  }

  const Eigen::MatrixXd q = Gram(p, res.v);
  if ((q - res.q).norm() > 1e-9 * q.norm()) {
    report.issues.push_back("stored Q differs from A^T V A");
  }
  const Eigen::VectorXd h = QuadraticForms(p.matrix(), q);
  report.recomputed_max_h = h.maxCoeff();
  const double limit = 1.0 + report.xi_prime;
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (h(i) > limit * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "row " << i << ": h_i(v) = " << h(i) << " exceeds 1 + xi' = " << limit;
      report.issues.push_back(msg.str());
    }
  }

  // Boundary points of E / sqrt(1 + xi') must satisfy every constraint.
  const Eigen::MatrixXd root = InvSqrt(q);
  Stream stream(seed, StreamTag::kAudit, {0xE11});
  report.inner_points = std::min<std::int64_t>(samples, 1000);
  for (std::int64_t s = 0; s < report.inner_points; ++s) {
    const Eigen::VectorXd x =
        root * RandomUnitVector(stream, p.cols()) / std::sqrt(std::max(limit, 1e-300));
    const double worst = (p.matrix() * x).cwiseAbs().maxCoeff();
    if (worst > 1.0 + 1e-9) ++report.inner_violations;
  }
  if (report.inner_violations > 0) {
    report.issues.push_back(std::to_string(report.inner_violations) +
                            " points of E / sqrt(1 + xi') lie outside P");
  }

  report.outer_samples = samples;
  for (const Eigen::VectorXd& x : HitAndRun(p, samples, seed)) {
    const double ratio = x.dot(res.q * x) / d;
    report.max_outer_ratio = std::max(report.max_outer_ratio, ratio);
    if (ratio > 1.0 + 1e-9) {
      if (report.outer_violations == 0) {
        std::ostringstream msg;
        msg << "sample with x^T Q x = " << ratio * d << " > d";
        report.issues.push_back(msg.str());
      }
      ++report.outer_violations;
    }
  }
  return report;
}

void RequireContainment(const ContainmentReport& report) {
  if (report.ok()) return;
  std::string message;
  for (const std::string& issue : report.issues) {
    if (!message.empty()) message += "; ";
    message += issue;
  }
  throw ContainmentViolation(message);
}

}  // namespace dpje
