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

#include "mbf/covariance.hpp"

#include <cmath>
#include <string>

#include "mbf/errors.hpp"
#include "mbf/fractional_delay.hpp"

namespace mbf {

const char* to_string(CovNormalization n) {
  return n == CovNormalization::n_sub ? "n_sub" : "subarray_length";
}

CovNormalization parse_cov_normalization(const std::string& s) {
  if (s == "n_sub") return CovNormalization::n_sub;
  if (s == "subarray_length") return CovNormalization::subarray_length;
  throw DomainError("unknown covariance normalization '" + s + "' (expected n_sub or subarray_length)");
}

bool HermitianMatrix::is_hermitian(double rel_tol) const {
  const double scale = std::max(entries.cwiseAbs().maxCoeff(), 1e-300);
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool HermitianMatrix::is_positive_definite() const {
  if (entries.size() == 0) return false;
  Eigen::LLT<Eigen::MatrixXcd> llt(entries);
  return llt.info() == Eigen::Success;
}

bool delayed_snapshot_into(const BasebandCube& cube, const FocalPoint& p, double c,
                           const ArrayGeometry& geom, std::span<cdouble> out) {
  if (!(c > 0.0)) throw DomainError("delayed_snapshot: speed of sound must be positive");
  const double r_tx = std::hypot(p.x - geom.source_x, p.y);
  const double last = double(cube.n_samples) - 1.0;
  bool outside = false;
  for (std::size_t n = 0; n < geom.size(); ++n) {
    const double t = (r_tx + std::hypot(p.x - geom.sensor_x[n], p.y)) / c;
    const double pos = (t - cube.time_origin) * cube.sample_rate;
    if (!(pos >= 0.0 && pos <= last)) {
      out[n] = 0.0;
      outside = true;
      continue;
    }
    const cdouble v = FractionalDelay::interpolate(cube.sensor(n), pos);
    out[n] = v * std::polar(1.0, kTwoPi * cube.carrier * t);
  }
  return outside;
}

DelayedSnapshot delayed_snapshot(const BasebandCube& cube, const FocalPoint& p, double c,
                                 const ArrayGeometry& geom) {
  if (cube.n_sensors != geom.size())
    throw DomainError("delayed_snapshot: cube and array disagree on sensor count");
  DelayedSnapshot s;
  s.values.resize(geom.size());
  s.out_of_record = delayed_snapshot_into(cube, p, c, geom, s.values);
  return s;
}

SnapshotSet subarray_snapshots(std::span<const cdouble> x, std::size_t L) {
  if (L < 1 || L > x.size()) throw DomainError("subarray_snapshots: L must lie in [1, N_sens]");
  const std::size_t n_sub = x.size() - L + 1;
  SnapshotSet s;
  s.snapshots.resize(static_cast<Eigen::Index>(L), static_cast<Eigen::Index>(n_sub));
  for (std::size_t l = 0; l < n_sub; ++l)
    for (std::size_t i = 0; i < L; ++i)
      s.snapshots(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = x[l + i];
  return s;
}

namespace kernels {

void sample_covariance(const Eigen::MatrixXcd& snapshots, double divisor, Eigen::MatrixXcd& out) {
  out.noalias() = snapshots * snapshots.adjoint();
  out /= divisor;
}

void forward_backward(Eigen::MatrixXcd& m) {
  // (J M^T J)(i, j) = M(L-1-j, L-1-i); update each mirrored pair once.
  const Eigen::Index L = m.rows();
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index j = 0; j < L; ++j) {
      const Eigen::Index pi = L - 1 - j;
      const Eigen::Index pj = L - 1 - i;
      // Visit (i, j) and its partner (pi, pj) once; the partner of the partner is (i, j).
      if (pi < i || (pi == i && pj < j)) continue;
      const cdouble avg = 0.5 * (m(i, j) + m(pi, pj));
      m(i, j) = avg;
      m(pi, pj) = avg;
    }
  }
}

void diagonal_load(Eigen::MatrixXcd& m, double eps) {
  const double load = eps * m.trace().real();
  m.diagonal().array() += load;
}

}  // namespace kernels

HermitianMatrix sample_covariance(const SnapshotSet& s, CovNormalization norm) {
  if (s.count() < 1) throw DomainError("sample_covariance: need at least one snapshot");
  const double divisor = norm == CovNormalization::n_sub ? double(s.count()) : double(s.length());
  HermitianMatrix h;
  kernels::sample_covariance(s.snapshots, divisor, h.entries);
  h.stage = CovStage::raw;
  return h;
}

HermitianMatrix forward_backward(const HermitianMatrix& m) {
  HermitianMatrix h{m.entries, CovStage::fb};
  kernels::forward_backward(h.entries);
  return h;
}

HermitianMatrix diagonal_load(const HermitianMatrix& m, double eps) {
  if (!(eps >= 0.0)) throw DomainError("diagonal_load: eps must be non-negative");
  HermitianMatrix h{m.entries, CovStage::dl};
  kernels::diagonal_load(h.entries, eps);
  return h;
}

}  // namespace mbf
