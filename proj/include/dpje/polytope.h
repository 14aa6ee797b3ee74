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

#ifndef DPJE_POLYTOPE_H_
#define DPJE_POLYTOPE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>

namespace dpje {

// A centrally symmetric polytope {x : |<a_i, x>| <= 1 for all i}, stored as
// the n x d constraint matrix A whose rows are the a_i. Instances are
// validated on construction (n >= d >= 1, finite entries, full column rank)
// and immutable afterwards.
class Polytope {
 public:
  // Relative singular-value floor below which A is declared rank deficient.
  static constexpr double kRankTolerance = 1e-10;

  // Throws DimensionError, ParseError (non-finite entries) or RankError.
  explicit Polytope(Eigen::MatrixXd a);

  Eigen::Index rows() const { return a_.rows(); }
  Eigen::Index cols() const { return a_.cols(); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  auto row(Eigen::Index i) const { return a_.row(i); }

 private:
  Eigen::MatrixXd a_;
};

// Declares that a neighbor differs from a base polytope in exactly one row.
struct NeighborPerturbation {
  Eigen::Index row = 0;       // 0-based row index j
  Eigen::VectorXd delta;      // a'_j = a_j + delta
  double closeness = 0.0;     // epsilon_0; requires ||delta||_2 <= closeness
};

enum class MatrixFormat { kCsv, kWhitespace };

// Picks kCsv for ".csv" files, kWhitespace otherwise.
MatrixFormat FormatForPath(const std::filesystem::path& path);

// Reads one constraint row per line. Blank lines and lines starting with '#'
// are skipped. Throws ParseError on unreadable files or malformed rows, then
// the Polytope validation errors.
Polytope LoadPolytope(const std::filesystem::path& path, MatrixFormat format);
Polytope ParsePolytope(const std::string& text, MatrixFormat format);

// Shortest round-trip representation of each entry, so that
// Parse(Serialize(p)) reproduces p bit for bit.
std::string SerializePolytope(const Polytope& p, MatrixFormat format);
void SavePolytope(const Polytope& p, const std::filesystem::path& path,
                  MatrixFormat format);

// Throws IndexError or ClosenessError. Rows other than `pert.row` are copied
// unchanged.
Polytope MakeNeighbor(const Polytope& p, const NeighborPerturbation& pert);

// Draws delta uniformly on the sphere of radius `closeness`.
NeighborPerturbation RandomNeighborPerturbation(Eigen::Index rows,
                                                Eigen::Index cols,
                                                double closeness,
                                                std::uint64_t seed);

struct SpectralStats {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double condition = 0.0;  // sigma_max / sigma_min
  std::size_t nnz = 0;
};

SpectralStats ComputeSpectralStats(const Polytope& p);

// Random polytope with i.i.d. standard normal rows. Regenerates on the
// (probability zero) event of rank deficiency.
Polytope RandomGaussianPolytope(Eigen::Index rows, Eigen::Index cols,
                                std::uint64_t seed);

}  // namespace dpje

#endif  // DPJE_POLYTOPE_H_
