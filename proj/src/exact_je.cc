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

#include "dpje/exact_je.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "dpje/errors.h"

namespace dpje {
namespace {

long ClampToFloor(WeightVector& w) {
  long clamped = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < kWeightFloor) {
      w(i) = kWeightFloor;
      ++clamped;
    }
  }
  return clamped;
}

}  // namespace

WeightVector ExactStep(const Polytope& p, const WeightVector& w) {
  return w.cwiseProduct(Leverage(p, w));
}

ExactResult ExactIterate(const Polytope& p, int iterations, bool keep_trace) {
  if (iterations < 1) {
    throw PreconditionError("iteration count must be >= 1, got " +
                            std::to_string(iterations));
  }
  const double n = static_cast<double>(p.rows());
  const double d = static_cast<double>(p.cols());
  ExactResult result;
  WeightVector w = WeightVector::Constant(p.rows(), d / n);
  WeightVector sum = WeightVector::Zero(p.rows());
  for (int k = 1; k <= iterations; ++k) {
    sum += w;
    if (keep_trace) result.trace.push_back(w);
    if (k == iterations) break;
    w = ExactStep(p, w);
    result.clamped += ClampToFloor(w);
  }
  result.u = sum / static_cast<double>(iterations);
  result.last = w;
  return result;
}

int ConvergenceIterations(double xi, Eigen::Index n, Eigen::Index d,
                          double delta0) {
  if (!(xi > 0.0) || !(delta0 > 0.0 && delta0 < 1.0) || n < d || d < 1) {
    throw DomainError("need xi > 0, 0 < delta0 < 1 and n >= d >= 1");
  }
  const double t = 16.0 / xi * std::log(static_cast<double>(n) / d) +
                   16.0 / (xi * xi) * std::log(1.0 / delta0);
  return std::max(1, static_cast<int>(std::ceil(t)));
}

double DualObjective(const Polytope& p, const WeightVector& w) {
  const Eigen::MatrixXd q = Gram(p, w);
  Eigen::LLT<Eigen::MatrixXd> llt(q);
  const double log_det =
      2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return w.sum() - log_det - static_cast<double>(p.cols());
}

OptimalityCertificate CheckOptimality(const Polytope& p, const WeightVector& w,
                                      double tol, double active_floor) {
  const double d = static_cast<double>(p.cols());
  OptimalityCertificate cert;
  cert.weight_sum = w.sum();
  if (std::abs(cert.weight_sum - d) > tol * d) {
    std::ostringstream msg;
    msg << "weights sum to " << cert.weight_sum << ", expected " << d
        << " within " << tol * d;
    throw PreconditionError(msg.str());
  }
  if (active_floor < 0.0) active_floor = tol * d / static_cast<double>(p.rows());
  const Eigen::VectorXd h = Leverage(p, w);
  cert.max_leverage = h.maxCoeff();
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    if (w(i) > active_floor) {
      ++cert.active_rows;
      cert.active_residual = std::max(cert.active_residual, std::abs(h(i) - 1.0));
    } else {
      cert.inactive_residual = std::max(cert.inactive_residual, h(i) - 1.0);
    }
  }
  cert.optimal = cert.active_residual <= tol && cert.inactive_residual <= tol;
  return cert;
}

WeightVector NormalizeToSum(const WeightVector& u, double d) {
  const double total = u.sum();
  if (!(total > 0.0)) throw DomainError("cannot normalize a zero weight vector");
  return u * (d / total);
}

void WriteTraceCsv(std::ostream& out, const std::vector<WeightVector>& trace) {
  out << "iteration,row,weight\n";
  char buf[32];
  for (std::size_t k = 0; k < trace.size(); ++k) {
    for (Eigen::Index i = 0; i < trace[k].size(); ++i) {
      const auto end = std::to_chars(buf, buf + sizeof(buf), trace[k](i)).ptr;
      out << (k + 1) << ',' << i << ',' << std::string_view(buf, end - buf)
          << '\n';
    }
  }
}

}  // namespace dpje
