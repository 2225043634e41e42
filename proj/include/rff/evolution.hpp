#pragma once

// State propagation three ways: deterministic master-equation integration
// (adaptive Runge-Kutta on the density matrix), stochastic trajectories
// under sampled stray fields (per-step exact unitaries), and closed-form
// evaluators for the sector-restricted dynamics.  Hamiltonians are H/ħ.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rff/geometry.hpp"
#include "rff/linalg.hpp"
#include "rff/noise.hpp"

namespace rff {

// ----------------------------------------------------------------------
// results

struct ExperimentResult {
  std::vector<double> t;
  std::vector<std::pair<std::string, std::vector<double>>> series;
  std::vector<std::pair<std::string, std::string>> meta;

  std::vector<double>& add_series(const std::string& name);
  const std::vector<double>& operator[](const std::string& name) const;
  bool has(const std::string& name) const;
};

// ----------------------------------------------------------------------
// master equation

// Contributes rate·[op, [rho, op]] to drho/dt (op Hermitian).
struct DephasingTerm {
  double rate = 0.0;
  Mat op;
};

// The dephasing generator with per-site rate 1/(8τ) and collective rate
// 1/(2τ'); pass tau <= 0 or tau_prime <= 0 to drop a term.
std::vector<DephasingTerm> dephasing_terms(double tau, double tau_prime, int n_atoms);

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double trace_tol = 1e-8;   // abort when |tr rho - 1| exceeds this
  double max_step = 0.0;     // 0 = unlimited
};

// Integrates drho/dt = i[rho, H] + Σ_j rate_j [A_j, [rho, A_j]] through the
// (sorted, increasing) grid; returns rho at each grid point.
std::vector<Mat> lindblad_evolve(const Mat& rho0, const Mat& h,
                                 const std::vector<DephasingTerm>& terms,
                                 const std::vector<double>& t_grid,
                                 const IntegratorOptions& opts = {});

// Reference propagation exp(L t) of the vectorized generator; the oracle
// the adaptive integrator is checked against.
Mat propagate_superop_exp(const Mat& rho0, const Mat& h,
                          const std::vector<DephasingTerm>& terms, double t);

// ----------------------------------------------------------------------
// stochastic trajectories

struct StochasticConfig {
  double dt = 0.0;
  double t_end = 0.0;
  int n_output = 31;          // output grid size (includes t = 0)
  double omega0 = 0.0;        // bias rate
  double dd_omega = 0.0;      // effective dipole-dipole scale, 0 = off
  NoiseParams noise;          // field statistics in rate units
  double noise_coupling = -1.0 / 3.0;  // factor on Σ b_k·σ_k
  std::vector<Vec3> sites;    // three sites, same length unit as 1/g
  int n_trajectories = 1000;
  std::uint64_t seed = 1;
  int n_threads = 0;          // 0 = hardware concurrency
};

// Per step applies the exact unitary exp(-i(H0+Hnoise(t))dt) to each
// trajectory and averages sector and qubit observables over trajectories.
// Series: P, S1, S2, S3 means plus *_stderr bands (NaN for one trajectory).
// The reduction order is fixed, so results depend only on the seed.
ExperimentResult stochastic_ensemble(const Vec3& s0, const StochasticConfig& cfg);

// ----------------------------------------------------------------------
// closed forms, three atoms

// <P>(t) = (2+e^{-t/τ})/3, transverse qubit components decay at 2/(3τ),
// the third at 1/τ.  Series: P, S1, S2, S3.
ExperimentResult analytic_three_atom(const Vec3& s0, double tau,
                                     const std::vector<double>& t_grid);

// f(t) = (Ω1 e^{-iΩ2 t} + Ω2 e^{iΩ1 t})/(Ω1+Ω2)
Complex f_of_t(double omega1, double omega2, double t);

// Restricted dynamics under geometric imperfection.  Series: P,
// Sigma1_phi, purity_s, F, F_bound, f_abs.
ExperimentResult analytic_imperfect(const Vec3& s0,
                                    const ImperfectionFrequencies& freqs,
                                    const std::vector<double>& t_grid);

// Worst-case-over-initial-states fidelity floor and its two-term
// small-angle expansion.
double fidelity_floor(Complex f);
double fidelity_floor_expansion(const ImperfectionFrequencies& freqs, double t);

struct EffectiveUnitary {
  Complex f;
  double phi = 0.0;
  Eigen::Matrix2cd qubit;  // action on the signal qubit alone
  Mat sector_op;           // the same operator on the full space
};
// Closed form of P exp(-iΩt(Jz² - J²/3 + K)) P for the given imperfection.
EffectiveUnitary analytic_effective_unitary(const std::array<double, 3>& eps_kl,
                                            double omega, double t);

// Numerical restriction P e^{-iHt} P (H Hermitian, any dimension).
Mat restricted_evolution(const Mat& h, const Mat& p_sector, double t);

// ----------------------------------------------------------------------
// single atom

// Closed-form expectation values and fidelity for one spin-1/2 under the
// same noise.  With the bias on the z component is frozen and the
// transverse components decay at 1/τ1; without it everything decays at
// 2/τ1.  Series: sx, sy, sz, F, F_bound.
ExperimentResult single_atom(const Vec3& s0, double omega0, double tau1,
                             bool bias_on, const std::vector<double>& t_grid);

// ----------------------------------------------------------------------
// four atoms

enum class FourAtomGeometry { Square, Pyramid };

// Restricted evolution in the j=0 sector.  f(t) is read off the trace of
// the restricted propagator.  Series: f_re, f_im, f_abs2, F_bound, and,
// when rho0 is given, P and F.  For the pyramid the height ratio defaults
// to the balanced value.
ExperimentResult four_atom_evolution(FourAtomGeometry geometry, double omega,
                                     const std::vector<double>& t_grid,
                                     const std::optional<Mat>& rho0 = std::nullopt,
                                     double pyramid_h_over_a = -1.0);

// ----------------------------------------------------------------------
// scalar helpers

// Fidelity of two single-qubit states from their Bloch vectors.
double fidelity_qubit(const Vec3& s1, const Vec3& s2);

struct ComCorrections {
  double overlap_factor = 0.0;  // erf(a / √(2w1² + 2w2²))
  double shift_fraction = 0.0;  // dipole-force equilibrium shift, units of w
};
ComCorrections com_corrections(double a, double w1, double w2, double omega,
                               double omega_trap);

}  // namespace rff
