#include "rff/hamiltonians.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "rff/errors.hpp"
#include "rff/spin_ops.hpp"

namespace rff {

Mat h_bias(double omega0, int n_atoms) {
  if (omega0 < 0.0) throw ParameterError("omega0 must be nonnegative");
  return omega0 * total_spin(n_atoms).jz;
}

double effective_noise_coupling() {
  return -PhysicalConstants::mu_B / (3.0 * PhysicalConstants::hbar);
}

double raw_noise_coupling() {
  return PhysicalConstants::mu_B / PhysicalConstants::hbar;
}

Mat h_noise(const std::vector<Vec3>& fields, double coupling) {
  const int n = static_cast<int>(fields.size());
  if (n != 3 && n != 4)
    throw ParameterError("h_noise needs one field vector per site (3 or 4 sites)");
  const int dim = 1 << n;
  Mat h = Mat::Zero(dim, dim);
  for (int k = 1; k <= n; ++k) {
    h += fields[k - 1].x() * pauli_site(k, Axis::X, n);
    h += fields[k - 1].y() * pauli_site(k, Axis::Y, n);
    h += fields[k - 1].z() * pauli_site(k, Axis::Z, n);
  }
  return coupling * h;
}

double dipole_coupling_a3() {
  return PhysicalConstants::mu0_over_4pi * PhysicalConstants::mu_B *
         PhysicalConstants::mu_B / (3.0 * PhysicalConstants::hbar);
}

double omega_dd(double a) {
  if (a <= 0.0) throw ParameterError("atom distance must be positive");
  return dipole_coupling_a3() / (a * a * a);
}

Mat h_dd_full(const std::vector<Vec3>& sites, int n_atoms, double omega_a3) {
  if (static_cast<int>(sites.size()) != n_atoms)
    throw ParameterError("site count does not match n_atoms");
  if (omega_a3 < 0.0) omega_a3 = dipole_coupling_a3();
  const int dim = 1 << n_atoms;
  Mat h = Mat::Zero(dim, dim);
  for (int k = 1; k <= n_atoms; ++k) {
    for (int l = k + 1; l <= n_atoms; ++l) {
      const Vec3 d = sites[l - 1] - sites[k - 1];
      const double dist = d.norm();
      if (dist <= 0.0)
        throw GeometryError("sites " + std::to_string(k) + " and " +
                            std::to_string(l) + " coincide");
      const Vec3 e = d / dist;
      const double omega_kl = omega_a3 / (dist * dist * dist);
      Mat pair = Mat::Zero(dim, dim);
      Mat sk[3], sl[3];
      for (int a = 0; a < 3; ++a) {
        sk[a] = pauli_site(k, static_cast<Axis>(a), n_atoms);
        sl[a] = pauli_site(l, static_cast<Axis>(a), n_atoms);
      }
      for (int a = 0; a < 3; ++a) pair += sk[a] * sl[a];
      Mat ke = e.x() * sk[0] + e.y() * sk[1] + e.z() * sk[2];
      Mat le = e.x() * sl[0] + e.y() * sl[1] + e.z() * sl[2];
      pair -= 3.0 * ke * le;
      h += (omega_kl / 3.0) * pair;
    }
  }
  return h;
}

Mat secular_projection(const Mat& h, int n_atoms) {
  const int dim = 1 << n_atoms;
  if (h.rows() != dim || h.cols() != dim)
    throw ParameterError("operator dimension does not match n_atoms");
  Mat out = h;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (std::popcount(static_cast<unsigned>(i)) !=
          std::popcount(static_cast<unsigned>(j)))
        out(i, j) = 0.0;
  return out;
}

Mat imperfection_k_operator(const std::array<double, 3>& eps_kl) {
  const int n = 3, dim = 8;
  const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 3}, {3, 1}}};
  Mat k_op = Mat::Zero(dim, dim);
  for (int p = 0; p < 3; ++p) {
    auto [k, l] = pairs[p];
    Mat dot = Mat::Zero(dim, dim);
    for (int a = 0; a < 3; ++a)
      dot += pauli_site(k, static_cast<Axis>(a), n) *
             pauli_site(l, static_cast<Axis>(a), n);
    Mat zz = pauli_site(k, Axis::Z, n) * pauli_site(l, Axis::Z, n);
    k_op += eps_kl[p] * 0.5 * (dot - 3.0 * zz);
  }
  return k_op;
}

Mat h_dd_effective(const std::array<double, 3>& eps_kl, double omega) {
  TotalSpin j = total_spin(3);
  Mat iso = (omega / 3.0) * (3.0 * j.jz * j.jz - j.jsq);
  return iso + omega * imperfection_k_operator(eps_kl);
}

double square_diagonal_constant() { return (4.0 - std::sqrt(2.0)) / 6.0; }

Mat h_dd_four_square(double omega, bool diagonal_correction) {
  const int n = 4, dim = 16;
  TotalSpin j = total_spin(n);
  Mat h = (omega / 3.0) * (3.0 * j.jz * j.jz - j.jsq);
  if (!diagonal_correction) return h;
  const double c = square_diagonal_constant();
  Mat k4 = Mat::Zero(dim, dim);
  for (auto [k, l] : {std::pair{1, 3}, std::pair{2, 4}}) {
    for (int a = 0; a < 3; ++a)
      k4 += pauli_site(k, static_cast<Axis>(a), n) *
            pauli_site(l, static_cast<Axis>(a), n);
    k4 -= 3.0 * pauli_site(k, Axis::Z, n) * pauli_site(l, Axis::Z, n);
  }
  return h + omega * (c / 4.0) * k4;
}

std::vector<Vec3> pyramid_sites(double h_over_a) {
  // base side 1, centroid at the origin, apex on the +z axis
  const double r = 1.0 / std::sqrt(3.0);
  std::vector<Vec3> sites(4);
  for (int k = 0; k < 3; ++k) {
    const double phi = M_PI / 2.0 + 2.0 * M_PI * k / 3.0;
    sites[k] = Vec3(r * std::cos(phi), r * std::sin(phi), 0.0);
  }
  sites[3] = Vec3(0.0, 0.0, h_over_a);
  return sites;
}

namespace {

double secular_pair_coupling(const Vec3& rk, const Vec3& rl) {
  const Vec3 d = rl - rk;
  const double dist = d.norm();
  const double cz = d.z() / dist;
  return (1.0 - 3.0 * cz * cz) / (dist * dist * dist);
}

}  // namespace

double pyramid_coupling_spread(double h_over_a) {
  auto sites = pyramid_sites(h_over_a);
  double lo = 0.0, hi = 0.0, sum = 0.0;
  bool first = true;
  for (int k = 0; k < 4; ++k)
    for (int l = k + 1; l < 4; ++l) {
      const double g = secular_pair_coupling(sites[k], sites[l]);
      if (first || g < lo) lo = g;
      if (first || g > hi) hi = g;
      sum += g;
      first = false;
    }
  return (hi - lo) / std::abs(sum / 6.0);
}

double pyramid_balance_ratio() {
  // difference between the apex-pair and base-pair couplings, signed
  auto diff = [](double h) {
    auto sites = pyramid_sites(h);
    return secular_pair_coupling(sites[0], sites[3]) -
           secular_pair_coupling(sites[0], sites[1]);
  };
  double lo = 0.3, hi = 1.0;
  double flo = diff(lo), fhi = diff(hi);
  if (flo * fhi > 0.0)
    throw NumericalError("pyramid balance root not bracketed in [0.3, 1.0]");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = diff(mid);
    if (fmid == 0.0 || hi - lo < 1e-15) {
      lo = hi = mid;
      break;
    }
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  const double h = 0.5 * (lo + hi);
  return std::sqrt(h * h + 1.0 / 3.0);  // b/a for base side 1
}

CouplingConstants derived_constants(const NoiseParams& noise, double a, double b0) {
  if (a <= 0.0 || b0 <= 0.0 || noise.b <= 0.0 || noise.g <= 0.0 || noise.gamma <= 0.0)
    throw ParameterError("derived_constants needs positive noise params, a, and B0");
  const double hbar = PhysicalConstants::hbar;
  const double mu_b = PhysicalConstants::mu_B;
  const double ga = noise.g * a;
  const double denom = 8.0 * noise.b * noise.b - 3.0 * ga * ga;
  if (denom <= 0.0)
    throw ParameterError("unphysical regime: 8b^2 must exceed 3(ga)^2");
  CouplingConstants c;
  c.tau = 3.0 * noise.gamma * std::pow(hbar / (mu_b * ga), 2);
  c.tau_prime = 3.0 * ga * ga / denom * c.tau;
  c.tau1 = 2.0 * c.tau * c.tau_prime / (c.tau + c.tau_prime);
  c.omega_dd = omega_dd(a);
  c.omega0 = 2.0 * mu_b * b0 / (3.0 * hbar);
  c.omega_tau = c.omega_dd * c.tau;
  return c;
}

std::vector<std::string> validate_regime(double omega0, double omega) {
  std::vector<std::string> warnings;
  const double hyperfine = 2.0 * M_PI * PhysicalConstants::hyperfine_split_hz;
  if (omega0 > 1e-3 * hyperfine) {
    std::ostringstream os;
    os << "bias precession omega0 = " << omega0
       << " rad/s is not small against the hyperfine splitting "
       << hyperfine << " rad/s; the two-level reduction is unreliable";
    warnings.push_back(os.str());
  }
  if (omega0 <= 10.0 * omega) {
    std::ostringstream os;
    os << "bias precession omega0 = " << omega0
       << " rad/s does not dominate the dipole-dipole scale " << omega
       << " rad/s; dipole transitions are not suppressed";
    warnings.push_back(os.str());
  }
  return warnings;
}

SectorFrequencies extract_sector_frequencies(const Mat& h, const Mat& p_sector,
                                             double weight_tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  SectorFrequencies out;
  double min_eig = 0.0, max_eig = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = (p_sector * es.eigenvectors().col(i)).squaredNorm();
    if (w < weight_tol) continue;
    const double lam = es.eigenvalues()(i);
    out.weighted.emplace_back(lam, w);
    min_eig = std::min(min_eig, lam);
    max_eig = std::max(max_eig, lam);
  }
  out.omega2 = max_eig;
  out.omega1 = -min_eig;
  out.leaky = min_eig < 0.0;
  return out;
}

}  // namespace rff
