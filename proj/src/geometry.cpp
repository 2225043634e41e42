#include "rff/geometry.hpp"

#include <cmath>

#include "rff/errors.hpp"

namespace rff {

namespace {
const Complex kQ = std::polar(1.0, 2.0 * M_PI / 3.0);
}

TriangleGeometry analyze(const std::array<Vec3, 3>& sites, const Vec3& e_z) {
  TriangleGeometry g;
  g.sites = sites;
  g.e_z = e_z.normalized();

  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
  double inv_cubes = 0.0;
  double scale = 0.0;
  for (int p = 0; p < 3; ++p) {
    const Vec3 d = sites[pairs[p].second] - sites[pairs[p].first];
    g.a_kl[p] = d.norm();
    scale = std::max(scale, g.a_kl[p]);
  }
  const Vec3 cross = (sites[1] - sites[0]).cross(sites[2] - sites[0]);
  if (scale <= 0.0 || cross.norm() < 1e-12 * scale * scale)
    throw GeometryError("sites are collinear or coincident");

  for (int p = 0; p < 3; ++p) inv_cubes += 1.0 / std::pow(g.a_kl[p], 3);
  g.a = std::cbrt(3.0 / inv_cubes);

  g.closure_residual = 0.0;
  for (int p = 0; p < 3; ++p) {
    const Vec3 d = sites[pairs[p].second] - sites[pairs[p].first];
    const Vec3 e_kl = d / g.a_kl[p];
    g.alpha[p] = (1.0 - std::pow(g.a / g.a_kl[p], 3)) / 3.0;
    g.ez_dot_ekl[p] = g.e_z.dot(e_kl);
    const double c2 = g.ez_dot_ekl[p] * g.ez_dot_ekl[p];
    g.eps[p] = g.alpha[p] + c2 - 3.0 * g.alpha[p] * c2;
    g.closure_residual += (g.a_kl[p] / g.a) * g.ez_dot_ekl[p];
  }
  g.eps_total = g.eps[0] + g.eps[1] + g.eps[2];
  g.kappa = g.eps[0] + kQ * kQ * g.eps[1] + kQ * g.eps[2];
  g.phi = std::abs(g.kappa) > 0.0 ? std::arg(g.kappa * g.kappa) : 0.0;
  return g;
}

ImperfectionFrequencies effective_frequencies(double eps_total, Complex kappa,
                                              double omega) {
  const double u = 1.0 - eps_total;
  const double k2 = std::norm(kappa);
  const double root = std::sqrt(u * u + 8.0 * k2);
  ImperfectionFrequencies f;
  // evaluate the subtracted branch as 8|κ|²/(root + |u|) to avoid cancellation
  if (u >= 0.0) {
    f.omega1 = 0.5 * omega * (root + u);
    f.omega2 = omega * 4.0 * k2 / (root + u);
  } else {
    f.omega1 = omega * 4.0 * k2 / (root - u);
    f.omega2 = 0.5 * omega * (root - u);
  }
  f.phi = k2 > 0.0 ? std::arg(kappa * kappa) : 0.0;
  return f;
}

ImperfectionFrequencies effective_frequencies(const TriangleGeometry& geom,
                                              double omega) {
  return effective_frequencies(geom.eps_total, geom.kappa, omega);
}

std::array<double, 3> compensate_tilt(const std::array<double, 3>& alpha_kl) {
  double sum_sq = 0.0;
  for (double a : alpha_kl) sum_sq += a * a;
  const double s = std::sqrt(2.0 / 3.0 * sum_sq);
  std::array<double, 3> targets{};
  for (int p = 0; p < 3; ++p) {
    targets[p] = s - alpha_kl[p];
    if (targets[p] < -1e-15)
      throw InfeasibleCompensationError(
          "compensation would need a negative squared projection for pair " +
          std::to_string(p));
    targets[p] = std::max(targets[p], 0.0);
  }
  return targets;
}

BiasFit fit_bias_direction(const std::array<Vec3, 3>& sites,
                           const std::array<double, 3>& targets) {
  const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
  std::array<Vec3, 3> e_kl;
  for (int p = 0; p < 3; ++p) {
    const Vec3 d = sites[pairs[p].second] - sites[pairs[p].first];
    e_kl[p] = d / d.norm();
  }
  auto cost = [&](const Vec3& ez) {
    double c = 0.0;
    for (int p = 0; p < 3; ++p) {
      const double proj2 = ez.dot(e_kl[p]) * ez.dot(e_kl[p]);
      c += (proj2 - targets[p]) * (proj2 - targets[p]);
    }
    return c;
  };
  auto dir = [](double theta, double phi) {
    return Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta));
  };

  // coarse scan of the hemisphere, then a shrinking local refinement
  double best_theta = 0.0, best_phi = 0.0, best = cost(dir(0.0, 0.0));
  const int nt = 90, np = 180;
  for (int i = 0; i <= nt; ++i)
    for (int j = 0; j < np; ++j) {
      const double th = M_PI / 2.0 * i / nt, ph = 2.0 * M_PI * j / np;
      const double c = cost(dir(th, ph));
      if (c < best) {
        best = c;
        best_theta = th;
        best_phi = ph;
      }
    }
  double step = M_PI / nt;
  for (int iter = 0; iter < 60; ++iter) {
    bool improved = false;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const double th = best_theta + step * di, ph = best_phi + step * dj;
        const double c = cost(dir(th, ph));
        if (c < best) {
          best = c;
          best_theta = th;
          best_phi = ph;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
    if (step < 1e-12) break;
  }
  BiasFit fit;
  fit.e_z = dir(best_theta, best_phi);
  fit.residual = std::sqrt(best);
  return fit;
}

}  // namespace rff
