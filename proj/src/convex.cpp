// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#include "cbfed/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbfed/errors.hpp"
#include "cbfed/rng.hpp"

namespace cbfed {

double ConvexSet::distance(const SpectralField& x) const { return norm_h(x - project(x)); }

Ball::Ball(double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
}

SpectralField Ball::project(const SpectralField& x) const {
  const double nx = norm_h(x);
  if (nx <= radius_) return x;
  return (radius_ / nx) * x;
}

double Ball::violation(const SpectralField& x) const { return norm_h(x) - radius_; }

double Ball::distance(const SpectralField& x) const {
  const double nx = norm_h(x);
  return nx <= radius_ * (1.0 + 1e-13) ? 0.0 : nx - radius_;
}

SpectralField Ball::sample_boundary(const TorusGrid& g, std::uint64_t seed) const {
  SpectralField u = random_solenoidal(g, seed, 2.0);
  return (radius_ / norm_h(u)) * u;
}

EigenSpan::EigenSpan(const TorusGrid& g, int n) : modes_(eigenbasis(n, g)) {}

std::vector<double> EigenSpan::coefficients(const SpectralField& x) const {
  std::vector<double> c(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) c[i] = inner_product(x, modes_[i].field);
  return c;
}

SpectralField EigenSpan::combine(const std::vector<double>& c) const {
  if (c.size() != modes_.size()) throw std::invalid_argument("coefficient count mismatch");
  SpectralField out(modes_.front().field.grid(), true);
  for (std::size_t i = 0; i < c.size(); ++i) out.axpy(c[i], modes_[i].field);
  return out;
}

SpectralField EigenSpan::project(const SpectralField& x) const {
  SpectralField out = combine(coefficients(x));
  out.set_solenoidal(true);
  return out;
}

double EigenSpan::violation(const SpectralField& x) const { return distance(x); }

SpectralField EigenSpan::sample_boundary(const TorusGrid&, std::uint64_t seed) const {
  CounterRng rng(seed, 17);
  std::vector<double> c(modes_.size());
  for (auto& v : c) v = rng.gaussian();
  return combine(c);
}

SpectralField yosida(const ConvexSet& k, const SpectralField& x, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("Yosida parameter must be positive");
  SpectralField out = x - k.project(x);
  out *= 1.0 / lambda;
  return out;
}

InvarianceReport check_resolvent_invariance(const ConvexSet& k, const TorusGrid& g,
                                            const std::vector<double>& lambdas, int samples,
                                            std::uint64_t seed, double tol) {
  InvarianceReport rep;
  rep.worst_violation = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    SpectralField x = k.sample_boundary(g, mix64(seed) + static_cast<std::uint64_t>(s));
    for (double lam : lambdas) {
      rep.worst_violation = std::max(rep.worst_violation, k.violation(resolvent(x, lam)));
      ++rep.samples;
    }
  }
  rep.ok = rep.worst_violation <= tol;
  return rep;
}

}  // namespace cbfed
