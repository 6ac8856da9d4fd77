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
#include <optional>
#include <string>
#include <vector>

#include "mbf/core_model.hpp"
#include "mbf/covariance.hpp"
#include "mbf/cube.hpp"
#include "mbf/quadrature.hpp"
#include "mbf/signal_chain.hpp"

namespace mbf {

enum class Method { das, mvdr, bayes };

const char* to_string(Method m);
Method parse_method(const std::string& s);

struct BeamformerConfig {
  Method method = Method::bayes;
  double c_fixed = 1519.0;           // speed for DAS/MVDR and for the range in gamma(p)
  std::size_t subarray_length = 16;  // L; N_sub = N_sens - L + 1
  SosPrior prior;
  std::size_t n_quad = 8;
  double snr0_db = 15.0;
  double dr_db = 96.0;
  std::optional<double> loading;  // diagonal-loading eps; default 1e-3 / N_sub
  CovNormalization normalization = CovNormalization::n_sub;
  TvgVariant range_model = TvgVariant::two_way;

  void validate(std::size_t n_sensors) const;
  std::size_t n_sub(std::size_t n_sensors) const { return n_sensors - subarray_length + 1; }
  double eps(std::size_t n_sensors) const { return loading.value_or(default_loading(n_sub(n_sensors))); }
};

enum PixelFlag : unsigned {
  kFlagNone = 0,
  kFlagOutOfRecord = 1u << 0,
  kFlagNotPositiveDefinite = 1u << 1,
  kFlagPosteriorFallback = 1u << 2,
};

struct SosPosterior {
  std::vector<double> nodes;    // c_n, m/s
  std::vector<double> log_v;    // log u_n + log-likelihood
  std::vector<double> weights;  // normalised, sum to 1
  bool fallback = false;        // every weight underflowed; prior weights used
};

struct PixelResult {
  cdouble value{};
  std::optional<SosPosterior> posterior;
  unsigned flags = kFlagNone;
};

/// Hann-weighted sum of the delayed snapshot.
cdouble das_pixel(const BasebandCube& cube, const FocalPoint& p, double c, const ArrayGeometry& geom);

/// Sigma^-1 1 / (1^H Sigma^-1 1) via Cholesky; throws DomainError if not positive definite.
Eigen::VectorXcd mvdr_weights(const HermitianMatrix& m);

/// 1 / (1^H Sigma^-1 1); throws DomainError if not positive definite.
double capon_power(const HermitianMatrix& m);

/// Likelihood strength from the focal-point noise model:
///   NL [dB]  = DR - SNR0 + 20 log10 r
///   SNR [dB] = SNR0 - 20 log10 r
///   gamma    = N_sub / NL^2 * N_sub SNR / (1 + N_sub SNR)   (linear power units)
double power_strength(double range, std::size_t n_sub, double snr0_db, double dr_db);

/// power_strength at the TVG range of p, using the fixed reference speed.
double gamma_of_p(const FocalPoint& p, const BeamformerConfig& cfg, const ArrayGeometry& geom);

/// N_sub * gamma(p) * P_s(p, c) with P_s from the FB + DL covariance at (p, c).
double log_likelihood(const FocalPoint& p, double c, const BasebandCube& cube,
                      const ArrayGeometry& geom, const BeamformerConfig& cfg);

/// Normalise log v_n = log u_n + ll_n by max subtraction.
SosPosterior posterior_from_log_likelihood(std::vector<double> nodes,
                                           const std::vector<double>& prior_weights,
                                           const std::vector<double>& log_likelihood);

SosPosterior sos_posterior(const FocalPoint& p, const BasebandCube& cube, const ArrayGeometry& geom,
                           const BeamformerConfig& cfg);

PixelResult mvdr_pixel(const BasebandCube& cube, const FocalPoint& p, const ArrayGeometry& geom,
                       const BeamformerConfig& cfg);

PixelResult bayes_pixel(const BasebandCube& cube, const FocalPoint& p, const ArrayGeometry& geom,
                        const BeamformerConfig& cfg);

/// Per-node quantities computed from one covariance.
struct NodeEvaluation {
  double c = 0.0;
  double capon_power = 0.0;
  cdouble output{};  // w^H x_bar
  unsigned flags = kFlagNone;
};

/// Per-thread scratch for the pixel loop. Not thread-safe; one per thread.
class PixelEngine {
 public:
  PixelEngine(const BasebandCube& cube, const ArrayGeometry& geom, const BeamformerConfig& cfg);

  NodeEvaluation evaluate_node(const FocalPoint& p, double c);
  PixelResult das(const FocalPoint& p);
  PixelResult mvdr(const FocalPoint& p);
  PixelResult bayes(const FocalPoint& p, bool keep_posterior = false);
  PixelResult pixel(const FocalPoint& p);

  const QuadratureRule& rule() const { return rule_; }

 private:
  const BasebandCube& cube_;
  const ArrayGeometry& geom_;
  BeamformerConfig cfg_;
  std::size_t L_;
  std::size_t n_sub_;
  double eps_;
  double divisor_;
  QuadratureRule rule_;
  std::vector<double> log_u_;
  std::vector<double> hann_;
  std::vector<cdouble> snap_;
  Eigen::MatrixXcd subs_;
  Eigen::MatrixXcd cov_;
  Eigen::VectorXcd xbar_;
  Eigen::VectorXcd ones_;
  Eigen::VectorXcd solved_;
  Eigen::LLT<Eigen::MatrixXcd> llt_;
  std::vector<NodeEvaluation> nodes_;
  std::vector<double> ll_;
};

struct Image {
  ScanGrid grid;
  std::vector<cdouble> pixels;  // row-major: iy * n_x + ix, rows are range
  std::vector<unsigned> flags;

  cdouble at(std::size_t ix, std::size_t iy) const { return pixels[iy * grid.n_x + ix]; }
};

struct FlagSummary {
  std::size_t out_of_record = 0;
  std::size_t not_positive_definite = 0;
  std::size_t posterior_fallback = 0;
  std::size_t flagged_pixels = 0;
};

FlagSummary summarize_flags(const Image& img);

/// OpenMP pixel loop; `threads` <= 0 uses the OpenMP default. Output does not
/// depend on the thread count or scheduling.
Image beamform_image(const BasebandCube& cube, const ScanGrid& grid, const ArrayGeometry& geom,
                     const BeamformerConfig& cfg, int threads = 0);

/// Single-threaded reference built directly from the public per-step
/// operations (allocating, no shared workspace). Kept for testing.
Image beamform_image_reference(const BasebandCube& cube, const ScanGrid& grid,
                               const ArrayGeometry& geom, const BeamformerConfig& cfg);

}  // namespace mbf
