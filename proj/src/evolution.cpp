#include "rff/evolution.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

#include "rff/errors.hpp"
#include "rff/hamiltonians.hpp"
#include "rff/spin_ops.hpp"

namespace rff {

// ----------------------------------------------------------------------
// ExperimentResult

std::vector<double>& ExperimentResult::add_series(const std::string& name) {
  series.emplace_back(name, std::vector<double>());
  return series.back().second;
}

const std::vector<double>& ExperimentResult::operator[](const std::string& name) const {
  for (const auto& [n, v] : series)
    if (n == name) return v;
  throw ParameterError("no series named " + name);
}

bool ExperimentResult::has(const std::string& name) const {
  for (const auto& [n, v] : series)
    if (n == name) return true;
  return false;
}

// ----------------------------------------------------------------------
// master equation

std::vector<DephasingTerm> dephasing_terms(double tau, double tau_prime, int n_atoms) {
  std::vector<DephasingTerm> terms;
  if (tau > 0.0)
    for (int k = 1; k <= n_atoms; ++k)
      terms.push_back({1.0 / (8.0 * tau), pauli_site(k, Axis::Z, n_atoms)});
  if (tau_prime > 0.0)
    terms.push_back({1.0 / (2.0 * tau_prime), total_spin(n_atoms).jz});
  return terms;
}

namespace {

struct Generator {
  const Mat& h;
  std::vector<Mat> ops;
  std::vector<Mat> ops_sq;
  std::vector<double> rates;

  explicit Generator(const Mat& hamiltonian, const std::vector<DephasingTerm>& terms)
      : h(hamiltonian) {
    for (const auto& t : terms) {
      ops.push_back(t.op);
      ops_sq.push_back(t.op * t.op);
      rates.push_back(t.rate);
    }
  }

  Mat operator()(const Mat& rho) const {
    Mat out = Complex(0, 1) * (rho * h - h * rho);
    for (std::size_t j = 0; j < ops.size(); ++j)
      out += rates[j] * (2.0 * ops[j] * rho * ops[j] - ops_sq[j] * rho - rho * ops_sq[j]);
    return out;
  }
};

}  // namespace

std::vector<Mat> lindblad_evolve(const Mat& rho0, const Mat& h,
                                 const std::vector<DephasingTerm>& terms,
                                 const std::vector<double>& t_grid,
                                 const IntegratorOptions& opts) {
  if (t_grid.empty()) throw ParameterError("empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw ParameterError("time grid must be strictly increasing");
  if (!is_hermitian(rho0, 1e-9) || std::abs(rho0.trace().real() - 1.0) > 1e-9)
    throw ParameterError("rho0 is not a unit-trace Hermitian matrix");

  const Generator rhs(h, terms);

  // Dormand-Prince 5(4); the generator is autonomous so the stage times
  // are not needed
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  std::vector<Mat> out;
  out.reserve(t_grid.size());
  Mat rho = rho0;
  double t = t_grid.front();
  out.push_back(rho);

  const double span = t_grid.back() - t_grid.front();
  double hstep = span > 0.0 ? span * 1e-3 : 1e-3;
  if (opts.max_step > 0.0) hstep = std::min(hstep, opts.max_step);

  std::size_t next = 1;
  int rejected_in_row = 0;
  while (next < t_grid.size()) {
    bool landing = false;
    if (t + hstep >= t_grid[next]) {
      hstep = t_grid[next] - t;
      landing = true;
    }

    const Mat k1 = rhs(rho);
    const Mat k2 = rhs(rho + hstep * a21 * k1);
    const Mat k3 = rhs(rho + hstep * (a31 * k1 + a32 * k2));
    const Mat k4 = rhs(rho + hstep * (a41 * k1 + a42 * k2 + a43 * k3));
    const Mat k5 = rhs(rho + hstep * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Mat k6 =
        rhs(rho + hstep * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Mat rho5 =
        rho + hstep * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Mat k7 = rhs(rho5);
    const Mat err_mat =
        hstep * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = opts.atol + opts.rtol * std::max(max_abs(rho), max_abs(rho5));
    const double err = max_abs(err_mat) / scale;

    if (err <= 1.0) {
      t += hstep;
      rho = rho5;
      rejected_in_row = 0;
      if (std::abs(rho.trace().real() - 1.0) > opts.trace_tol)
        throw NumericalError("trace drift exceeded tolerance during integration");
      if (landing) {
        out.push_back(rho);
        ++next;
      }
    } else if (++rejected_in_row > 60) {
      throw NumericalError("step size underflow in master-equation integrator");
    }
    const double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    hstep *= std::clamp(grow, 0.2, 5.0);
    if (opts.max_step > 0.0) hstep = std::min(hstep, opts.max_step);
  }
  return out;
}

Mat propagate_superop_exp(const Mat& rho0, const Mat& h,
                          const std::vector<DephasingTerm>& terms, double t) {
  const Eigen::Index d = rho0.rows();
  const Eigen::Index d2 = d * d;
  Mat id = Mat::Identity(d, d);
  Mat el = Complex(0, 1) * (kron(h.transpose(), id) - kron(id, h));
  for (const auto& term : terms) {
    const Mat a = term.op;
    const Mat a2 = a * a;
    el += term.rate *
          (2.0 * kron(a.transpose(), a) - kron(id, a2) - kron(a2.transpose(), id));
  }
  Mat prop = (el * t).exp();
  Vec v = Eigen::Map<const Vec>(rho0.data(), d2);
  Vec w = prop * v;
  return Eigen::Map<const Mat>(w.data(), d, d);
}

// ----------------------------------------------------------------------
// closed forms, three atoms

ExperimentResult analytic_three_atom(const Vec3& s0, double tau,
                                     const std::vector<double>& t_grid) {
  if (tau <= 0.0) throw ParameterError("tau must be positive");
  if (s0.norm() > 1.0 + 1e-10) throw ParameterError("Bloch vector length exceeds 1");
  ExperimentResult r;
  r.t = t_grid;
  auto& p = r.add_series("P");
  auto& s1 = r.add_series("S1");
  auto& s2 = r.add_series("S2");
  auto& s3 = r.add_series("S3");
  for (double t : t_grid) {
    const double slow = std::exp(-t / tau);
    const double transverse = std::exp(-2.0 * t / (3.0 * tau));
    p.push_back((2.0 + slow) / 3.0);
    s1.push_back(s0.x() * transverse);
    s2.push_back(s0.y() * transverse);
    s3.push_back(s0.z() * slow);
  }
  return r;
}

Complex f_of_t(double omega1, double omega2, double t) {
  if (omega1 + omega2 <= 0.0)
    throw ParameterError("f(t) needs omega1 + omega2 > 0");
  const Complex i(0, 1);
  return (omega1 * std::exp(-i * omega2 * t) + omega2 * std::exp(i * omega1 * t)) /
         (omega1 + omega2);
}

double fidelity_floor(Complex f) {
  const double num = std::norm(1.0 - f);
  const double den = (1.0 + std::abs(f)) * (1.0 + std::abs(f));
  return std::sqrt(std::max(0.0, 1.0 - num / den));
}

double fidelity_floor_expansion(const ImperfectionFrequencies& freqs, double t) {
  const double half = 0.5 * freqs.omega2 * t;
  return std::cos(half) - 0.5 * freqs.omega2 / freqs.omega1 * std::sin(half);
}

ExperimentResult analytic_imperfect(const Vec3& s0,
                                    const ImperfectionFrequencies& freqs,
                                    const std::vector<double>& t_grid) {
  if (s0.norm() > 1.0 + 1e-10) throw ParameterError("Bloch vector length exceeds 1");
  const double s0_len = s0.norm();
  const double sp0 = s0.x() * std::cos(freqs.phi) - s0.y() * std::sin(freqs.phi);

  ExperimentResult r;
  r.t = t_grid;
  auto& p = r.add_series("P");
  auto& s1p = r.add_series("Sigma1_phi");
  auto& purity = r.add_series("purity_s");
  auto& fid = r.add_series("F");
  auto& bound = r.add_series("F_bound");
  auto& fabs = r.add_series("f_abs");

  for (double t : t_grid) {
    const Complex f = f_of_t(freqs.omega1, freqs.omega2, t);
    const double af = std::abs(f), af2 = std::norm(f);
    const double pt = 0.5 * (1.0 + af2) - 0.5 * (1.0 - af2) * sp0;
    p.push_back(pt);
    s1p.push_back((0.5 * (1.0 + af2) * sp0 - 0.5 * (1.0 - af2)) / pt);
    const double st2 = 1.0 - af2 / (pt * pt) * (1.0 - s0_len * s0_len);
    purity.push_back(std::sqrt(std::max(0.0, st2)));
    double f2 = 1.0 - std::norm(1.0 - f) / (4.0 * pt) * (1.0 - sp0 * sp0) +
                (af - f.real()) / (2.0 * pt) * (1.0 - s0_len * s0_len);
    fid.push_back(std::sqrt(std::clamp(f2, 0.0, 1.0)));
    bound.push_back(fidelity_floor(f));
    fabs.push_back(af);
  }
  return r;
}

EffectiveUnitary analytic_effective_unitary(const std::array<double, 3>& eps_kl,
                                            double omega, double t) {
  const Complex q = std::polar(1.0, 2.0 * M_PI / 3.0);
  const double eps_total = eps_kl[0] + eps_kl[1] + eps_kl[2];
  const Complex kappa = eps_kl[0] + q * q * eps_kl[1] + q * eps_kl[2];
  const auto freqs = effective_frequencies(eps_total, kappa, omega);

  EffectiveUnitary u;
  u.phi = freqs.phi;
  u.f = std::abs(kappa) > 0.0 ? f_of_t(freqs.omega1, freqs.omega2, t)
                              : Complex(1.0, 0.0);

  const Complex half_plus = 0.5 * (1.0 + u.f), half_minus = 0.5 * (1.0 - u.f);
  Eigen::Matrix2cd sx, sy;
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  u.qubit = half_plus * Eigen::Matrix2cd::Identity() -
            half_minus * (std::cos(u.phi) * sx - std::sin(u.phi) * sy);
  u.sector_op = half_plus * projector_j(0.5) -
                half_minus * (std::cos(u.phi) * sigma_rff(1) -
                              std::sin(u.phi) * sigma_rff(2));
  return u;
}

Mat restricted_evolution(const Mat& h, const Mat& p_sector, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Vec phases =
      (Complex(0, -1) * t * es.eigenvalues().cast<Complex>()).array().exp();
  Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return p_sector * u * p_sector;
}

// ----------------------------------------------------------------------
// single atom

ExperimentResult single_atom(const Vec3& s0, double omega0, double tau1,
                             bool bias_on, const std::vector<double>& t_grid) {
  if (tau1 <= 0.0) throw ParameterError("tau1 must be positive");
  if (s0.norm() > 1.0 + 1e-10) throw ParameterError("Bloch vector length exceeds 1");
  ExperimentResult r;
  r.t = t_grid;
  auto& sx = r.add_series("sx");
  auto& sy = r.add_series("sy");
  auto& sz = r.add_series("sz");
  auto& fid = r.add_series("F");
  auto& bound = r.add_series("F_bound");
  for (double t : t_grid) {
    Vec3 s;
    if (bias_on) {
      const double decay = std::exp(-t / tau1);
      const double c = std::cos(omega0 * t), sn = std::sin(omega0 * t);
      s = Vec3(decay * (s0.x() * c - s0.y() * sn),
               decay * (s0.x() * sn + s0.y() * c), s0.z());
      bound.push_back(std::sqrt(0.5 * (1.0 + decay * c)));
    } else {
      const double decay = std::exp(-2.0 * t / tau1);
      s = decay * s0;
      bound.push_back(std::sqrt(0.5 * (1.0 + decay)));
    }
    sx.push_back(s.x());
    sy.push_back(s.y());
    sz.push_back(s.z());
    fid.push_back(fidelity_qubit(s, s0));
  }
  return r;
}

// ----------------------------------------------------------------------
// four atoms

ExperimentResult four_atom_evolution(FourAtomGeometry geometry, double omega,
                                     const std::vector<double>& t_grid,
                                     const std::optional<Mat>& rho0,
                                     double pyramid_h_over_a) {
  Mat h;
  if (geometry == FourAtomGeometry::Square) {
    h = h_dd_four_square(omega);
  } else {
    double h_over_a = pyramid_h_over_a;
    if (h_over_a < 0.0) {
      const double b_over_a = pyramid_balance_ratio();
      h_over_a = std::sqrt(b_over_a * b_over_a - 1.0 / 3.0);
    }
    h = secular_projection(h_dd_full(pyramid_sites(h_over_a), 4, omega), 4);
  }

  const FourAtomSector sector = four_atom_sector();
  const Mat& p0 = sector.p_j0;
  Eigen::MatrixXcd basis(16, 2);
  basis.col(0) = sector.basis[0];
  basis.col(1) = sector.basis[1];

  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  // sector weight per eigenvector: trace of the restricted propagator is
  // then a plain phase sum
  Eigen::VectorXd weights(16);
  for (int i = 0; i < 16; ++i)
    weights(i) = (p0 * es.eigenvectors().col(i)).squaredNorm();

  ExperimentResult r;
  r.t = t_grid;
  auto& f_re = r.add_series("f_re");
  auto& f_im = r.add_series("f_im");
  auto& f_abs2 = r.add_series("f_abs2");
  auto& bound = r.add_series("F_bound");
  std::vector<double>*p_series = nullptr, *fid_series = nullptr;

  Vec3 s_init = Vec3::Zero();
  Eigen::Matrix2cd rho_tilde0;
  if (rho0) {
    if (expectation(p0, *rho0) < 1.0 - 1e-9)
      throw ParameterError("initial state must be supported on the j=0 sector");
    p_series = &r.add_series("P");
    fid_series = &r.add_series("F");
    rho_tilde0 = basis.adjoint() * (*rho0) * basis;
    s_init = Vec3((rho_tilde0(0, 1) + rho_tilde0(1, 0)).real(),
                  (Complex(0, 1) * (rho_tilde0(0, 1) - rho_tilde0(1, 0))).real(),
                  (rho_tilde0(0, 0) - rho_tilde0(1, 1)).real());
  }

  for (double t : t_grid) {
    const Vec phases =
        (Complex(0, -1) * t * es.eigenvalues().cast<Complex>()).array().exp();
    Complex tr_restricted = 0.0;
    for (int i = 0; i < 16; ++i) tr_restricted += phases(i) * weights(i);
    const Complex f = tr_restricted - 1.0;
    f_re.push_back(f.real());
    f_im.push_back(f.imag());
    f_abs2.push_back(std::norm(f));
    bound.push_back(fidelity_floor(f));

    if (rho0) {
      Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
      Mat u_eff = p0 * u * p0;
      Mat rho_t = u_eff * (*rho0) * u_eff.adjoint();
      const double pt = rho_t.trace().real();
      p_series->push_back(pt);
      Eigen::Matrix2cd rt = basis.adjoint() * rho_t * basis / pt;
      const Vec3 s_t((rt(0, 1) + rt(1, 0)).real(),
                     (Complex(0, 1) * (rt(0, 1) - rt(1, 0))).real(),
                     (rt(0, 0) - rt(1, 1)).real());
      fid_series->push_back(fidelity_qubit(s_t, s_init));
    }
  }
  return r;
}

// ----------------------------------------------------------------------
// scalar helpers

double fidelity_qubit(const Vec3& s1, const Vec3& s2) {
  if (s1.norm() > 1.0 + 1e-10 || s2.norm() > 1.0 + 1e-10)
    throw ParameterError("Bloch vector length exceeds 1");
  const double m1 = std::max(0.0, 1.0 - s1.squaredNorm());
  const double m2 = std::max(0.0, 1.0 - s2.squaredNorm());
  const double f2 = 0.5 * (1.0 + s1.dot(s2)) + 0.5 * std::sqrt(m1) * std::sqrt(m2);
  return std::sqrt(std::clamp(f2, 0.0, 1.0));
}

ComCorrections com_corrections(double a, double w1, double w2, double omega,
                               double omega_trap) {
  if (a <= 0.0 || w1 < 0.0 || w2 < 0.0 || (w1 == 0.0 && w2 == 0.0))
    throw ParameterError("com_corrections needs a > 0 and a positive width");
  if (omega_trap <= 0.0) throw ParameterError("omega_trap must be positive");
  ComCorrections c;
  c.overlap_factor = std::erf(a / std::sqrt(2.0 * w1 * w1 + 2.0 * w2 * w2));
  const double w = std::sqrt(0.5 * (w1 * w1 + w2 * w2));
  c.shift_fraction = 2.0 * omega / omega_trap * w / a;
  return c;
}

}  // namespace rff
