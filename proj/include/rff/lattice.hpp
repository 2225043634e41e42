#pragma once

// Six-beam optical interference potential: two sets of three coplanar
// beams, mutual angle 2π/3 within each set.  The long-wavelength set
// makes the coarse triangular lattice of sites; the short-wavelength set
// splits every site into a trio of wells.  Attractive (red-detuned)
// wells: V = -(s_long·I_long + s_short·I_short) with three-beam
// intensities I = |Σ exp(i(k·r+φ))|².

#include <array>
#include <vector>

#include "rff/linalg.hpp"

namespace rff {

using Vec2 = Eigen::Vector2d;

struct LatticeConfig {
  double lambda_long = 10.6e-6;            // m
  double lambda_short = 10.6e-6 / 8.0;     // m
  std::array<double, 3> phases_long{0.0, 0.0, 0.0};
  std::array<double, 3> phases_short{2.0 * M_PI / 3.0, 0.0, -2.0 * M_PI / 3.0};
  // Strength of the short-wavelength (fine) pattern relative to the
  // long-wavelength (coarse) one.  The coarse strength is 1.
  double intensity_ratio = 4.0;
  double atom_mass = 9.98834e-27;          // kg
  double orientation_deg = 90.0;           // direction of k1, both sets
  double short_orientation_deg = 0.0;      // extra rotation of the short set
};

// Potential value, gradient, and Hessian at a point (unnormalized units).
double potential(const LatticeConfig& cfg, double x, double y);
Vec2 potential_gradient(const LatticeConfig& cfg, const Vec2& r);
Eigen::Matrix2d potential_hessian(const LatticeConfig& cfg, const Vec2& r);

// Primitive vectors of the coarse (long-wavelength) lattice.
std::pair<Vec2, Vec2> long_lattice_vectors(const LatticeConfig& cfg);

struct Minimum {
  Vec2 r;
  double value = 0.0;       // unnormalized potential
  double grad_norm = 0.0;
};

// All distinct local minima in the axis-aligned box [center ± halfspan],
// from a grid of Newton-refined starts, sorted by depth.  Throws
// NumericalError if no start converges.
std::vector<Minimum> find_minima(const LatticeConfig& cfg, const Vec2& center,
                                 double halfspan, int grid = 48);

struct TrioGeometry {
  std::array<Vec2, 3> wells;
  Vec2 center;                  // trio centroid
  double intra_distance = 0.0;  // mean pairwise well distance
  double distance_spread = 0.0; // (max-min)/mean pairwise
  double inter_site_distance = 0.0;  // centroid-to-centroid, adjacent sites
  double depth = 0.0;           // well value (unnormalized)
};

// Locates the trio of degenerate global minima at the site nearest the
// origin and measures the emergent lengths.
TrioGeometry trio_geometry(const LatticeConfig& cfg);

struct HarmonicFit {
  double omega_trap = 0.0;  // rad/s, from the mean curvature
  double width = 0.0;       // ground-state gaussian width √(ħ/(2Mω))
  double anisotropy = 0.0;  // relative split of the two curvatures
};

// Quadratic fit at a verified minimum via central finite differences.
// physical_scale converts the unnormalized potential to Joules.
// Throws NotAMinimumError when the Hessian is not positive definite.
HarmonicFit harmonic_fit(const LatticeConfig& cfg, const Vec2& minimum,
                         double physical_scale);

// Width from trap frequency alone (the fit relation inverted).
double width_from_trap_frequency(double omega_trap, double mass);

struct ContourData {
  std::vector<double> xs, ys;      // grid axes (m)
  std::vector<double> values;      // row-major V, normalized to min = -1
  // cut through the vertically aligned pair of wells, and through the
  // remaining well and the saddle; both sampled at grid resolution
  std::vector<double> cut_pair_s, cut_pair_v;
  std::vector<double> cut_third_s, cut_third_v;
};

// Grid over [center ± halfspan]; resolution is points per axis (>= 32).
ContourData contour_grid(const LatticeConfig& cfg, const Vec2& center,
                         double halfspan, int resolution);

}  // namespace rff
