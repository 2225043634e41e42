#pragma once

// Triangle-shape and bias-tilt imperfection analysis: the α_kl distance
// deviations, the ε_kl couplings they induce, the complex κ that controls
// the slow leakage frequency, and the compensating bias tilt.

#include <array>

#include "rff/linalg.hpp"

namespace rff {

struct TriangleGeometry {
  std::array<Vec3, 3> sites;
  Vec3 e_z;                            // unit bias direction
  double a = 0.0;                      // mean distance, Σ (a/a_kl)³ = 3
  std::array<double, 3> a_kl{};        // pair order (1,2), (2,3), (3,1)
  std::array<double, 3> alpha{};       // (a/a_kl)³ = 1 - 3 α_kl
  std::array<double, 3> ez_dot_ekl{};  // signed, ê_kl from k to l
  std::array<double, 3> eps{};         // α + c² - 3αc²
  double eps_total = 0.0;
  Complex kappa{0.0, 0.0};             // ε12 + q² ε23 + q ε31
  double phi = 0.0;                    // arg(κ²), in (-π, π]
  double closure_residual = 0.0;       // Σ (a_kl/a) ê_z·ê_kl
};

// Throws GeometryError for collinear sites.
TriangleGeometry analyze(const std::array<Vec3, 3>& sites, const Vec3& e_z);

struct ImperfectionFrequencies {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double phi = 0.0;
};

// Ω_{1,2} = (Ω/2)(√((1-ε)² + 8|κ|²) ± (1-ε)), evaluated cancellation-free.
ImperfectionFrequencies effective_frequencies(const TriangleGeometry& geom,
                                              double omega);
ImperfectionFrequencies effective_frequencies(double eps_total, Complex kappa,
                                              double omega);

// Target squared projections (ê_z·ê_kl)² = √((2/3) Σ α²) - α_kl that make
// the three ε_kl equal to first order (κ = O(α²)).  Throws
// InfeasibleCompensationError when a target would be negative.
std::array<double, 3> compensate_tilt(const std::array<double, 3>& alpha_kl);

// Best-effort realization of target squared projections by a unit bias
// direction: least squares on the sphere.  Geometry permitting, the
// returned direction reproduces the targets to the stated residual.
struct BiasFit {
  Vec3 e_z;
  double residual = 0.0;  // √Σ((ê_z·ê_kl)² - target)²
};
BiasFit fit_bias_direction(const std::array<Vec3, 3>& sites,
                           const std::array<double, 3>& targets);

}  // namespace rff
