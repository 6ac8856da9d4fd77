// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "mbf/core_model.hpp"
#include "mbf/cube.hpp"

namespace mbf {

enum class CovStage { raw, fb, dl };

/// Divisor of the sample covariance: number of subarrays (default) or the
/// subarray length.
enum class CovNormalization { n_sub, subarray_length };

const char* to_string(CovNormalization n);
CovNormalization parse_cov_normalization(const std::string& s);

struct HermitianMatrix {
  Eigen::MatrixXcd entries;
  CovStage stage = CovStage::raw;

  Eigen::Index size() const { return entries.rows(); }
  bool is_hermitian(double rel_tol = 1e-12) const;
  bool is_positive_definite() const;
};

/// Overlapping subarray snapshots, one per column (L rows, N_sub columns).
struct SnapshotSet {
  Eigen::MatrixXcd snapshots;

  std::size_t length() const { return static_cast<std::size_t>(snapshots.rows()); }
  std::size_t count() const { return static_cast<std::size_t>(snapshots.cols()); }
};

struct DelayedSnapshot {
  std::vector<cdouble> values;
  bool out_of_record = false;
};

/// Samples each sensor at its round-trip time t(p, c, n) with band-limited
/// interpolation and removes the carrier phase, so a source at p appears with
/// an all-ones steering vector. Delays outside the record give zero entries.
DelayedSnapshot delayed_snapshot(const BasebandCube& cube, const FocalPoint& p, double c,
                                 const ArrayGeometry& geom);

/// Allocation-free variant; returns true when any delay fell outside the record.
bool delayed_snapshot_into(const BasebandCube& cube, const FocalPoint& p, double c,
                           const ArrayGeometry& geom, std::span<cdouble> out);

/// Contiguous length-L windows starting at sensors 0 .. N_sens - L.
SnapshotSet subarray_snapshots(std::span<const cdouble> x, std::size_t L);

HermitianMatrix sample_covariance(const SnapshotSet& s,
                                  CovNormalization norm = CovNormalization::n_sub);

/// (S + J S^T J) / 2 with J the exchange matrix.
HermitianMatrix forward_backward(const HermitianMatrix& m);

/// S + eps * trace(S) * I.
HermitianMatrix diagonal_load(const HermitianMatrix& m, double eps);

/// Loading factor 1e-3 / N_sub.
inline double default_loading(std::size_t n_sub) { return 1e-3 / double(n_sub); }

// In-place kernels shared by the public operations and the pixel loop.
namespace kernels {
void sample_covariance(const Eigen::MatrixXcd& snapshots, double divisor, Eigen::MatrixXcd& out);
void forward_backward(Eigen::MatrixXcd& m);
void diagonal_load(Eigen::MatrixXcd& m, double eps);
}  // namespace kernels

}  // namespace mbf
