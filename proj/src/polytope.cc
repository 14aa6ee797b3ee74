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

#include "dpje/polytope.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "dpje/errors.h"
#include "dpje/random.h"

namespace dpje {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseNumber(std::string_view token, std::size_t line_number) {
  token = Trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || end != token.data() + token.size()) {
    throw ParseError("line " + std::to_string(line_number) +
                     ": cannot parse '" + std::string(token) + "' as a number");
  }
  if (!std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_number) +
                     ": non-finite entry '" + std::string(token) + "'");
  }
  return value;
}

std::vector<double> SplitRow(std::string_view line, MatrixFormat format,
                             std::size_t line_number) {
  std::vector<double> row;
  if (format == MatrixFormat::kCsv) {
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      row.push_back(ParseNumber(line.substr(start, comma - start), line_number));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else {
    std::size_t pos = 0;
    while (pos < line.size()) {
      pos = line.find_first_not_of(" \t\r", pos);
      if (pos == std::string_view::npos) break;
      std::size_t end = line.find_first_of(" \t\r", pos);
      if (end == std::string_view::npos) end = line.size();
      row.push_back(ParseNumber(line.substr(pos, end - pos), line_number));
      pos = end;
    }
  }
  return row;
}

}  // namespace

Polytope::Polytope(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (a_.cols() < 1 || a_.rows() < a_.cols()) {
    throw DimensionError("polytope needs n >= d >= 1, got n=" +
                         std::to_string(a_.rows()) +
                         ", d=" + std::to_string(a_.cols()));
  }
  if (!a_.allFinite()) throw ParseError("polytope has non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a_);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smax > 0.0) || !(smin > kRankTolerance * smax)) {
    std::ostringstream msg;
    msg << "constraint matrix is not of full column rank (sigma_min=" << smin
        << ", sigma_max=" << smax << ")";
    throw RankError(msg.str());
  }
}

MatrixFormat FormatForPath(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::kCsv
                                    : MatrixFormat::kWhitespace;
}

Polytope ParsePolytope(const std::string& text, MatrixFormat format) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    rows.push_back(SplitRow(trimmed, format, line_number));
    if (rows.back().size() != rows.front().size()) {
      throw ParseError("line " + std::to_string(line_number) + ": expected " +
                       std::to_string(rows.front().size()) + " columns, got " +
                       std::to_string(rows.back().size()));
    }
  }
  if (rows.empty()) throw ParseError("no matrix rows found");
  Eigen::MatrixXd a(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) a(i, j) = rows[i][j];
  }
  return Polytope(std::move(a));
}

Polytope LoadPolytope(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParsePolytope(buffer.str(), format);
}

std::string SerializePolytope(const Polytope& p, MatrixFormat format) {
  const char separator = format == MatrixFormat::kCsv ? ',' : ' ';
  std::string out;
  char buf[32];
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (j > 0) out.push_back(separator);
      const auto result = std::to_chars(buf, buf + sizeof(buf), p.matrix()(i, j));
      out.append(buf, result.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void SavePolytope(const Polytope& p, const std::filesystem::path& path,
                  MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << SerializePolytope(p, format);
}

Polytope MakeNeighbor(const Polytope& p, const NeighborPerturbation& pert) {
  if (pert.row < 0 || pert.row >= p.rows()) {
    throw IndexError("row " + std::to_string(pert.row) + " out of range [0, " +
                     std::to_string(p.rows()) + ")");
  }
  if (pert.delta.size() != p.cols()) {
    throw DimensionError("perturbation has " + std::to_string(pert.delta.size()) +
                         " entries, polytope has d=" + std::to_string(p.cols()));
  }
  const double norm = pert.delta.norm();
  if (norm > pert.closeness * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "||delta||_2 = " << norm << " exceeds closeness " << pert.closeness;
    throw ClosenessError(msg.str());
  }
  Eigen::MatrixXd a = p.matrix();
  a.row(pert.row) += pert.delta.transpose();
  return Polytope(std::move(a));
}

NeighborPerturbation RandomNeighborPerturbation(Eigen::Index rows,
                                                Eigen::Index cols,
                                                double closeness,
                                                std::uint64_t seed) {
  Stream stream(seed, StreamTag::kNeighbor);
  NeighborPerturbation pert;
  pert.row = static_cast<Eigen::Index>(stream.Bits() % static_cast<std::uint64_t>(rows));
  pert.closeness = closeness;
  Eigen::VectorXd dir(cols);
  do {
    for (Eigen::Index k = 0; k < cols; ++k) dir(k) = stream.Normal();
  } while (dir.norm() == 0.0);
  pert.delta = dir * (closeness / dir.norm());
  return pert;
}

SpectralStats ComputeSpectralStats(const Polytope& p) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(p.matrix());
  const auto& s = svd.singularValues();
  SpectralStats stats;
  stats.sigma_max = s(0);
  stats.sigma_min = s(s.size() - 1);
  stats.condition = stats.sigma_max / stats.sigma_min;
  stats.nnz = static_cast<std::size_t>((p.matrix().array() != 0.0).count());
  return stats;
}

Polytope RandomGaussianPolytope(Eigen::Index rows, Eigen::Index cols,
                                std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Stream stream(seed, StreamTag::kPolytope, {attempt});
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = stream.Normal();
    }
    try {
      return Polytope(std::move(a));
    } catch (const RankError&) {
      if (attempt > 8) throw;
    }
  }
}

}  // namespace dpje
