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

#include "mbf/beamform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mbf/errors.hpp"

namespace mbf {

const char* to_string(Method m) {
  switch (m) {
    case Method::das: return "das";
    case Method::mvdr: return "mvdr";
    case Method::bayes: return "bayes";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "das") return Method::das;
  if (s == "mvdr") return Method::mvdr;
  if (s == "bayes") return Method::bayes;
  throw DomainError("unknown method '" + s + "' (expected das, mvdr or bayes)");
}

void BeamformerConfig::validate(std::size_t n_sensors) const {
  if (!(c_fixed > 0.0)) throw DomainError("beamformer: c_fixed must be positive");
  if (subarray_length < 1 || subarray_length > n_sensors)
    throw DomainError("beamformer: subarray_length must lie in [1, N_sens]");
  prior.validate();
  if (n_quad < 1 || n_quad > 128) throw DomainError("beamformer: n_quad must lie in [1, 128]");
  if (!std::isfinite(snr0_db)) throw DomainError("beamformer: snr0_db must be finite");
  if (!(dr_db > 0.0) || !std::isfinite(dr_db)) throw DomainError("beamformer: dr_db must be positive");
  if (loading && !(*loading >= 0.0)) throw DomainError("beamformer: loading must be non-negative");
}

cdouble das_pixel(const BasebandCube& cube, const FocalPoint& p, double c, const ArrayGeometry& geom) {
  const DelayedSnapshot s = delayed_snapshot(cube, p, c, geom);
  const std::vector<double> w = hann_weights(geom.size());
  cdouble y = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) y += w[n] * s.values[n];
  return y;
}

namespace {

Eigen::VectorXcd solve_ones(const HermitianMatrix& m, cdouble& denom) {
  const Eigen::Index L = m.size();
  if (L == 0) throw DomainError("mvdr: empty covariance");
  Eigen::LLT<Eigen::MatrixXcd> llt(m.entries);
  if (llt.info() != Eigen::Success) throw DomainError("mvdr: covariance is not positive definite");
  const Eigen::VectorXcd ones = Eigen::VectorXcd::Ones(L);
  Eigen::VectorXcd z = llt.solve(ones);
  denom = ones.dot(z);
  if (!(denom.real() > 0.0) || !std::isfinite(denom.real()))
    throw DomainError("mvdr: covariance is not positive definite");
  return z;
}

double range_of(const FocalPoint& p, const BeamformerConfig& cfg, const ArrayGeometry& geom) {
  const double d = std::hypot(p.x - geom.source_x, p.y) + std::hypot(p.x - geom.center_x(), p.y);
  return tvg_range(d / cfg.c_fixed, cfg.c_fixed, cfg.range_model);
}

std::vector<double> prior_log_weights(const QuadratureRule& rule) {
  std::vector<double> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i)
    out[i] = std::log(rule.weights[i] / std::sqrt(std::numbers::pi));
  return out;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

Eigen::VectorXcd mvdr_weights(const HermitianMatrix& m) {
  cdouble denom;
  Eigen::VectorXcd z = solve_ones(m, denom);
  return z / denom;
}

double capon_power(const HermitianMatrix& m) {
  cdouble denom;
  solve_ones(m, denom);
  return 1.0 / denom.real();
}

double power_strength(double range, std::size_t n_sub, double snr0_db, double dr_db) {
  if (!(range > 0.0)) throw DomainError("power_strength: range must be positive");
  if (n_sub < 1) throw DomainError("power_strength: n_sub must be at least 1");
  const double spread = 20.0 * std::log10(range);
  const double nl = std::pow(10.0, (dr_db - snr0_db + spread) / 10.0);
  const double snr = std::pow(10.0, (snr0_db - spread) / 10.0);
  const double n = double(n_sub);
  return n / (nl * nl) * (n * snr) / (1.0 + n * snr);
}

double gamma_of_p(const FocalPoint& p, const BeamformerConfig& cfg, const ArrayGeometry& geom) {
  return power_strength(range_of(p, cfg, geom), cfg.n_sub(geom.size()), cfg.snr0_db, cfg.dr_db);
}

double log_likelihood(const FocalPoint& p, double c, const BasebandCube& cube,
                      const ArrayGeometry& geom, const BeamformerConfig& cfg) {
  cfg.validate(geom.size());
  const DelayedSnapshot s = delayed_snapshot(cube, p, c, geom);
  const std::size_t n_sub = cfg.n_sub(geom.size());
  const HermitianMatrix raw = sample_covariance(subarray_snapshots(s.values, cfg.subarray_length), cfg.normalization);
  if (raw.entries.trace().real() == 0.0) return 0.0;  // zero-energy limit
  const HermitianMatrix cov = diagonal_load(forward_backward(raw), cfg.eps(geom.size()));
  return double(n_sub) * gamma_of_p(p, cfg, geom) * capon_power(cov);
}

SosPosterior posterior_from_log_likelihood(std::vector<double> nodes,
                                           const std::vector<double>& prior_weights,
                                           const std::vector<double>& log_likelihood) {
  const std::size_t n = nodes.size();
  if (prior_weights.size() != n || log_likelihood.size() != n || n == 0)
    throw DomainError("posterior: nodes, weights and likelihoods must have equal non-zero length");
  SosPosterior post;
  post.nodes = std::move(nodes);
  post.log_v.resize(n);
  post.weights.resize(n);
  double peak = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    const double lv = std::log(prior_weights[i]) + log_likelihood[i];
    post.log_v[i] = std::isnan(lv) ? kNegInf : lv;
    peak = std::max(peak, post.log_v[i]);
  }
  double total = 0.0;
  if (std::isfinite(peak)) {
    for (std::size_t i = 0; i < n; ++i) total += post.weights[i] = std::exp(post.log_v[i] - peak);
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    post.fallback = true;
    total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += post.weights[i] = prior_weights[i];
  }
  for (double& w : post.weights) w /= total;
  return post;
}

// ---------------------------------------------------------------------------
// PixelEngine

PixelEngine::PixelEngine(const BasebandCube& cube, const ArrayGeometry& geom, const BeamformerConfig& cfg)
    : cube_(cube), geom_(geom), cfg_(cfg) {
  geom.validate();
  if (cube.n_sensors != geom.size())
    throw DomainError("beamformer: cube has " + std::to_string(cube.n_sensors) + " sensors, array has " +
                      std::to_string(geom.size()));
  cfg.validate(geom.size());
  L_ = cfg.subarray_length;
  n_sub_ = cfg.n_sub(geom.size());
  eps_ = cfg.eps(geom.size());
  divisor_ = cfg.normalization == CovNormalization::n_sub ? double(n_sub_) : double(L_);
  rule_ = gauss_hermite(cfg.n_quad);
  log_u_ = prior_log_weights(rule_);
  hann_ = hann_weights(geom.size());
  snap_.resize(geom.size());
  const auto Li = static_cast<Eigen::Index>(L_);
  subs_.resize(Li, static_cast<Eigen::Index>(n_sub_));
  cov_.resize(Li, Li);
  xbar_.resize(Li);
  ones_ = Eigen::VectorXcd::Ones(Li);
  solved_.resize(Li);
  llt_ = Eigen::LLT<Eigen::MatrixXcd>(Li);
  nodes_.resize(rule_.size());
  ll_.resize(rule_.size());
}

NodeEvaluation PixelEngine::evaluate_node(const FocalPoint& p, double c) {
  NodeEvaluation e;
  e.c = c;
  if (delayed_snapshot_into(cube_, p, c, geom_, snap_)) e.flags |= kFlagOutOfRecord;
  for (std::size_t l = 0; l < n_sub_; ++l)
    for (std::size_t i = 0; i < L_; ++i)
      subs_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = snap_[l + i];
  kernels::sample_covariance(subs_, divisor_, cov_);
  kernels::forward_backward(cov_);
  // No energy at any sensor: the Capon power tends to zero with the data.
  if (cov_.trace().real() == 0.0) return e;
  kernels::diagonal_load(cov_, eps_);
  llt_.compute(cov_);
  if (llt_.info() != Eigen::Success) {
    e.flags |= kFlagNotPositiveDefinite;
    return e;
  }
  solved_ = llt_.solve(ones_);
  const cdouble denom = ones_.dot(solved_);
  if (!(denom.real() > 0.0) || !std::isfinite(denom.real())) {
    e.flags |= kFlagNotPositiveDefinite;
    return e;
  }
  xbar_ = subs_.rowwise().mean();
  e.capon_power = 1.0 / denom.real();
  e.output = solved_.dot(xbar_) / std::conj(denom);
  return e;
}

PixelResult PixelEngine::das(const FocalPoint& p) {
  PixelResult r;
  if (delayed_snapshot_into(cube_, p, cfg_.c_fixed, geom_, snap_)) r.flags |= kFlagOutOfRecord;
  cdouble y = 0.0;
  for (std::size_t n = 0; n < hann_.size(); ++n) y += hann_[n] * snap_[n];
  r.value = y;
  return r;
}

PixelResult PixelEngine::mvdr(const FocalPoint& p) {
  const NodeEvaluation e = evaluate_node(p, cfg_.c_fixed);
  PixelResult r;
  r.value = e.output;
  r.flags = e.flags;
  return r;
}

PixelResult PixelEngine::bayes(const FocalPoint& p, bool keep_posterior) {
  const double gamma = gamma_of_p(p, cfg_, geom_);
  const double scale = double(n_sub_) * gamma;
  PixelResult r;
  double peak = kNegInf;
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    nodes_[i] = evaluate_node(p, node_to_sos(rule_.nodes[i], cfg_.prior));
    r.flags |= nodes_[i].flags;
    ll_[i] = (nodes_[i].flags & kFlagNotPositiveDefinite) ? kNegInf : log_u_[i] + scale * nodes_[i].capon_power;
    peak = std::max(peak, ll_[i]);
  }
  double total = 0.0;
  cdouble acc = 0.0;
  if (std::isfinite(peak)) {
    for (std::size_t i = 0; i < rule_.size(); ++i) {
      const double w = std::exp(ll_[i] - peak);
      total += w;
      acc += w * nodes_[i].output;
    }
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    r.flags |= kFlagPosteriorFallback;
    total = 0.0;
    acc = 0.0;
    for (std::size_t i = 0; i < rule_.size(); ++i) {
      const double w = rule_.weights[i];
      total += w;
      acc += w * nodes_[i].output;
    }
  }
  r.value = acc / total;
  if (keep_posterior) {
    std::vector<double> c(rule_.size()), u(rule_.size()), ll(rule_.size());
    for (std::size_t i = 0; i < rule_.size(); ++i) {
      c[i] = nodes_[i].c;
      u[i] = std::exp(log_u_[i]);
      ll[i] = ll_[i] - log_u_[i];
      if (nodes_[i].flags & kFlagNotPositiveDefinite) ll[i] = kNegInf;
    }
    r.posterior = posterior_from_log_likelihood(std::move(c), u, ll);
  }
  return r;
}

PixelResult PixelEngine::pixel(const FocalPoint& p) {
  switch (cfg_.method) {
    case Method::das: return das(p);
    case Method::mvdr: return mvdr(p);
    case Method::bayes: return bayes(p);
  }
  throw DomainError("beamformer: unknown method");
}

SosPosterior sos_posterior(const FocalPoint& p, const BasebandCube& cube, const ArrayGeometry& geom,
                           const BeamformerConfig& cfg) {
  PixelEngine engine(cube, geom, cfg);
  return *engine.bayes(p, true).posterior;
}

PixelResult mvdr_pixel(const BasebandCube& cube, const FocalPoint& p, const ArrayGeometry& geom,
                       const BeamformerConfig& cfg) {
  PixelEngine engine(cube, geom, cfg);
  return engine.mvdr(p);
}

PixelResult bayes_pixel(const BasebandCube& cube, const FocalPoint& p, const ArrayGeometry& geom,
                        const BeamformerConfig& cfg) {
  PixelEngine engine(cube, geom, cfg);
  return engine.bayes(p, true);
}

// ---------------------------------------------------------------------------
// Image loops

FlagSummary summarize_flags(const Image& img) {
  FlagSummary s;
  for (unsigned f : img.flags) {
    if (f & kFlagOutOfRecord) ++s.out_of_record;
    if (f & kFlagNotPositiveDefinite) ++s.not_positive_definite;
    if (f & kFlagPosteriorFallback) ++s.posterior_fallback;
    if (f) ++s.flagged_pixels;
  }
  return s;
}

namespace {

Image blank_image(const ScanGrid& grid) {
  grid.validate();
  Image img;
  img.grid = grid;
  img.pixels.assign(grid.pixel_count(), cdouble{});
  img.flags.assign(grid.pixel_count(), kFlagNone);
  return img;
}

}  // namespace

Image beamform_image(const BasebandCube& cube, const ScanGrid& grid, const ArrayGeometry& geom,
                     const BeamformerConfig& cfg, int threads) {
  Image img = blank_image(grid);
  // Validate once on the calling thread so errors are not thrown inside the parallel region.
  PixelEngine probe(cube, geom, cfg);
  const auto n_rows = static_cast<std::ptrdiff_t>(grid.n_y);

#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(nt)
#endif
  {
    PixelEngine engine(cube, geom, cfg);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 1)
#endif
    for (std::ptrdiff_t iy = 0; iy < n_rows; ++iy) {
      for (std::size_t ix = 0; ix < grid.n_x; ++ix) {
        const std::size_t k = static_cast<std::size_t>(iy) * grid.n_x + ix;
        const PixelResult r = engine.pixel(grid.point(ix, static_cast<std::size_t>(iy)));
        img.pixels[k] = r.value;
        img.flags[k] = r.flags;
      }
    }
  }
  (void)threads;
  return img;
}

Image beamform_image_reference(const BasebandCube& cube, const ScanGrid& grid, const ArrayGeometry& geom,
                               const BeamformerConfig& cfg) {
  geom.validate();
  if (cube.n_sensors != geom.size()) throw DomainError("beamformer: cube and array disagree on sensor count");
  cfg.validate(geom.size());
  Image img = blank_image(grid);
  const std::size_t n_sub = cfg.n_sub(geom.size());
  const double eps = cfg.eps(geom.size());
  const QuadratureRule rule = gauss_hermite(cfg.n_quad);
  std::vector<double> u(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) u[i] = rule.weights[i] / std::sqrt(std::numbers::pi);
  const std::vector<double> hann = hann_weights(geom.size());

  // Output and Capon power of the FB + DL MVDR beamformer at (p, c).
  auto mvdr_at = [&](const FocalPoint& p, double c, unsigned& flags, double& power) -> cdouble {
    const DelayedSnapshot s = delayed_snapshot(cube, p, c, geom);
    if (s.out_of_record) flags |= kFlagOutOfRecord;
    const SnapshotSet subs = subarray_snapshots(s.values, cfg.subarray_length);
    const HermitianMatrix raw = sample_covariance(subs, cfg.normalization);
    if (raw.entries.trace().real() == 0.0) {
      power = 0.0;
      return 0.0;
    }
    const HermitianMatrix cov = diagonal_load(forward_backward(raw), eps);
    try {
      const Eigen::VectorXcd w = mvdr_weights(cov);
      power = capon_power(cov);
      const Eigen::VectorXcd xbar = subs.snapshots.rowwise().mean();
      return w.dot(xbar);
    } catch (const DomainError&) {
      flags |= kFlagNotPositiveDefinite;
      power = std::numeric_limits<double>::quiet_NaN();
      return 0.0;
    }
  };

  for (std::size_t iy = 0; iy < grid.n_y; ++iy) {
    for (std::size_t ix = 0; ix < grid.n_x; ++ix) {
      const FocalPoint p = grid.point(ix, iy);
      const std::size_t k = iy * grid.n_x + ix;
      unsigned flags = kFlagNone;
      cdouble value = 0.0;
      if (cfg.method == Method::das) {
        const DelayedSnapshot s = delayed_snapshot(cube, p, cfg.c_fixed, geom);
        if (s.out_of_record) flags |= kFlagOutOfRecord;
        for (std::size_t n = 0; n < hann.size(); ++n) value += hann[n] * s.values[n];
      } else if (cfg.method == Method::mvdr) {
        double power = 0.0;
        value = mvdr_at(p, cfg.c_fixed, flags, power);
      } else {
        const double gamma = gamma_of_p(p, cfg, geom);
        std::vector<double> c(rule.size()), ll(rule.size());
        std::vector<cdouble> y(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) {
          c[i] = node_to_sos(rule.nodes[i], cfg.prior);
          double power = 0.0;
          y[i] = mvdr_at(p, c[i], flags, power);
          ll[i] = std::isnan(power) ? kNegInf : double(n_sub) * gamma * power;
        }
        const SosPosterior post = posterior_from_log_likelihood(c, u, ll);
        if (post.fallback) flags |= kFlagPosteriorFallback;
        for (std::size_t i = 0; i < rule.size(); ++i) value += post.weights[i] * y[i];
      }
      img.pixels[k] = value;
      img.flags[k] = flags;
    }
  }
  return img;
}

}  // namespace mbf
