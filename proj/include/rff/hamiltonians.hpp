#pragma once

// Hamiltonian builders and derived physical constants.  All operators are
// returned as H/ħ in angular-rate units: feed SI inputs and the entries
// are rad/s; feed dimensionless rates and everything stays dimensionless.

#include <array>
#include <string>
#include <vector>

#include "rff/linalg.hpp"
#include "rff/noise.hpp"

namespace rff {

struct PhysicalConstants {
  static constexpr double mu_B = 9.2740100783e-24;        // J/T
  static constexpr double mu0_over_4pi = 1e-7;            // T·m/A, exact
  static constexpr double hbar = 1.054571817e-34;         // J·s
  static constexpr double gyro_ratio = -2.0 / 3.0;        // f=1/2 ground state
  static constexpr double hyperfine_split_hz = 228.2e6;   // f=1/2 to f=3/2
  static constexpr double li6_mass = 9.98834e-27;         // kg
};

struct CouplingConstants {
  double omega0 = 0.0;     // bias precession, rad/s
  double omega_dd = 0.0;   // dipole-dipole scale, rad/s
  double tau = 0.0;        // s
  double tau_prime = 0.0;  // s
  double tau1 = 0.0;       // s
  double omega_tau = 0.0;  // dimensionless product Ω·τ
};

// ħω0 Jz (returned as ω0·Jz).
Mat h_bias(double omega0, int n_atoms);

// Coupling factor multiplying Σ_k b_k·σ_k.  The effective value carries
// the -1/3 gyromagnetic ratio of the f=1/2 ground state.
double effective_noise_coupling();  // -mu_B/(3ħ)
double raw_noise_coupling();        // +mu_B/ħ

// coupling · Σ_k b_k·σ_k with one field vector per site.
Mat h_noise(const std::vector<Vec3>& fields, double coupling);

// Dipole-dipole rate ħΩ = (μ0/4π) μ_B²/(3a³), returned as Ω in rad/s.
double omega_dd(double a);

// Ω·a³ in SI; the per-pair coupling of h_dd_full is omega_a3 / a_kl³.
double dipole_coupling_a3();

// Full (non-secular) dipole-dipole Hamiltonian
//   Σ_pairs (Ω_kl/3) σ_k·(1 - 3 ê_kl ê_kl)·σ_l,   Ω_kl = omega_a3 / a_kl³.
// Pass omega_a3 = Ω·a³ in your unit system (defaults to SI).
Mat h_dd_full(const std::vector<Vec3>& sites, int n_atoms, double omega_a3 = -1.0);

// Keep only the matrix elements that conserve Jz (equivalently: commute
// with the bias).  This is the rotating-wave truncation, done exactly.
Mat secular_projection(const Mat& h, int n_atoms);

// K = Σ_pairs ε_kl (σ_k·σ_l - 3 σ_kz σ_lz)/2 on the three-atom space,
// pair order (1,2), (2,3), (3,1).
Mat imperfection_k_operator(const std::array<double, 3>& eps_kl);

// (Ω/3)(3Jz² - J²) + Ω K; reduces to the ideal secular form for ε ≡ 0.
Mat h_dd_effective(const std::array<double, 3>& eps_kl, double omega);

// Four atoms on a square: (Ω/3)(3Jz² - J²) + Ω K4 with
// K4 = (c/4)(σ1·σ3 + σ2·σ4 - 3σ1z σ3z - 3σ2z σ4z), c = (4-√2)/6.
double square_diagonal_constant();  // c
Mat h_dd_four_square(double omega, bool diagonal_correction = true);

// Pyramid of Fig-type geometry: equilateral base (side a) in the plane
// perpendicular to the bias, apex over the centroid at height h.
std::vector<Vec3> pyramid_sites(double h_over_a);

// Secular pair coupling factor (1 - 3(ê_z·ê_kl)²)/a_kl³ relative to the
// base pairs; spread = (max-min)/|mean| over the six pairs.
double pyramid_coupling_spread(double h_over_a);

// Height ratio at which all six pair couplings are equal, returned as b/a
// (apex-to-base distance over base side).  Bisection on h/a in [0.3, 1.0].
double pyramid_balance_ratio();

// τ = 3Γ(ħ/(μ_B g a))², τ' = 3(ga)²τ/(8b² - 3(ga)²), τ1 = 2ττ'/(τ+τ'),
// ω0 = 2 μ_B B0/(3ħ).  Throws ParameterError when 8b² ≤ 3(ga)².
CouplingConstants derived_constants(const NoiseParams& noise, double a, double b0);

// Warnings when the bias is too strong for the two-level reduction or too
// weak to dominate the dipole-dipole scale.
std::vector<std::string> validate_regime(double omega0, double omega);

// Frequencies of the sector-restricted evolution, read off from the
// eigen-decomposition of H: eigenvalues whose eigenvectors overlap the
// sector.  The restricted propagator is a combination of exp(-i λ t) over
// these; the negative branch is the fast frequency, the positive branch
// the slow one.
struct SectorFrequencies {
  double omega1 = 0.0;  // -(most negative weighted eigenvalue)
  double omega2 = 0.0;  // largest weighted eigenvalue
  bool leaky = false;   // false when the sector is exactly decoupled
  std::vector<std::pair<double, double>> weighted;  // (eigenvalue, weight)
};
SectorFrequencies extract_sector_frequencies(const Mat& h, const Mat& p_sector,
                                             double weight_tol = 1e-9);

}  // namespace rff
