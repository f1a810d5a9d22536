// Copyright 2026 The cbfed Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cbfed/field.hpp"
#include "cbfed/spectral.hpp"

namespace cbfed {

// Closed convex subset K of the solenoidal state space.
class ConvexSet {
 public:
  virtual ~ConvexSet() = default;
  virtual std::string name() const = 0;
  virtual SpectralField project(const SpectralField& x) const = 0;
  // <= 0 inside K, > 0 outside; scale of a distance.
  virtual double violation(const SpectralField& x) const = 0;
  // A deterministic point of the boundary (of the relative boundary for subspaces).
  virtual SpectralField sample_boundary(const TorusGrid& g, std::uint64_t seed) const = 0;
  virtual double distance(const SpectralField& x) const;

  bool contains(const SpectralField& x, double tol = 1e-12) const { return violation(x) <= tol; }
};

using ConvexSetPtr = std::shared_ptr<const ConvexSet>;

class Ball : public ConvexSet {
 public:
  explicit Ball(double radius);
  std::string name() const override { return "ball"; }
  SpectralField project(const SpectralField& x) const override;
  double violation(const SpectralField& x) const override;
  SpectralField sample_boundary(const TorusGrid& g, std::uint64_t seed) const override;
  // Points within a relative 1e-13 of the sphere count as inside (round-off of the rescale).
  double distance(const SpectralField& x) const override;
  double radius() const { return radius_; }

 private:
  double radius_;
};

// span{w_1..w_n} of the first n eigenfunctions of I + A.
class EigenSpan : public ConvexSet {
 public:
  EigenSpan(const TorusGrid& g, int n);
  std::string name() const override { return "eigen_span"; }
  SpectralField project(const SpectralField& x) const override;
  double violation(const SpectralField& x) const override;
  SpectralField sample_boundary(const TorusGrid& g, std::uint64_t seed) const override;

  std::vector<double> coefficients(const SpectralField& x) const;
  SpectralField combine(const std::vector<double>& c) const;
  const std::vector<EigenMode>& modes() const { return modes_; }
  int size() const { return static_cast<int>(modes_.size()); }

 private:
  std::vector<EigenMode> modes_;
};

// (x - P_K x) / lambda
SpectralField yosida(const ConvexSet& k, const SpectralField& x, double lambda);

struct InvarianceReport {
  double worst_violation = 0.0;
  int samples = 0;
  bool ok = true;
};

// Checks (I + lambda A)^{-1} K in K on sampled boundary points.
InvarianceReport check_resolvent_invariance(const ConvexSet& k, const TorusGrid& g,
                                            const std::vector<double>& lambdas, int samples,
                                            std::uint64_t seed, double tol = 1e-12);

}  // namespace cbfed
