#include "rff/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "rff/errors.hpp"

namespace rff {

namespace {

constexpr double kHbar = 1.054571817e-34;

// One set of three beams reduced to its pair representation:
// I(r) = 3 + 2 Σ_m cos(d_m·r + ψ_m)
struct PairSet {
  std::array<Vec2, 3> d;
  std::array<double, 3> psi;
  double strength = 0.0;
};

std::array<PairSet, 2> pair_sets(const LatticeConfig& cfg) {
  auto build = [](double lambda, const std::array<double, 3>& phases,
                  double orient_deg, double strength) {
    const double k = 2.0 * M_PI / lambda;
    std::array<Vec2, 3> kv;
    for (int j = 0; j < 3; ++j) {
      const double th = orient_deg * M_PI / 180.0 + 2.0 * M_PI * j / 3.0;
      kv[j] = k * Vec2(std::cos(th), std::sin(th));
    }
    PairSet set;
    set.strength = strength;
    const std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
    for (int m = 0; m < 3; ++m) {
      set.d[m] = kv[pairs[m].first] - kv[pairs[m].second];
      set.psi[m] = phases[pairs[m].first] - phases[pairs[m].second];
    }
    return set;
  };
  if (cfg.lambda_long <= 0.0 || cfg.lambda_short <= 0.0)
    throw ParameterError("wavelengths must be positive");
  return {build(cfg.lambda_long, cfg.phases_long, cfg.orientation_deg, 1.0),
          build(cfg.lambda_short, cfg.phases_short,
                cfg.orientation_deg + cfg.short_orientation_deg,
                cfg.intensity_ratio)};
}

}  // namespace

double potential(const LatticeConfig& cfg, double x, double y) {
  const Vec2 r(x, y);
  double v = 0.0;
  for (const auto& set : pair_sets(cfg)) {
    double intensity = 3.0;
    for (int m = 0; m < 3; ++m)
      intensity += 2.0 * std::cos(set.d[m].dot(r) + set.psi[m]);
    v -= set.strength * intensity;
  }
  return v;
}

Vec2 potential_gradient(const LatticeConfig& cfg, const Vec2& r) {
  Vec2 g = Vec2::Zero();
  for (const auto& set : pair_sets(cfg))
    for (int m = 0; m < 3; ++m)
      g += 2.0 * set.strength * set.d[m] * std::sin(set.d[m].dot(r) + set.psi[m]);
  return g;
}

Eigen::Matrix2d potential_hessian(const LatticeConfig& cfg, const Vec2& r) {
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  for (const auto& set : pair_sets(cfg))
    for (int m = 0; m < 3; ++m)
      h += 2.0 * set.strength * set.d[m] * set.d[m].transpose() *
           std::cos(set.d[m].dot(r) + set.psi[m]);
  return h;
}

std::pair<Vec2, Vec2> long_lattice_vectors(const LatticeConfig& cfg) {
  const auto sets = pair_sets(cfg);
  Eigen::Matrix2d d;
  d.row(0) = sets[0].d[0];
  d.row(1) = sets[0].d[1];
  Eigen::Matrix2d a = d.inverse() * (2.0 * M_PI * Eigen::Matrix2d::Identity());
  return {a.col(0), a.col(1)};
}

std::vector<Minimum> find_minima(const LatticeConfig& cfg, const Vec2& center,
                                 double halfspan, int grid) {
  const auto sets = pair_sets(cfg);
  double grad_scale = 0.0;
  for (const auto& set : sets)
    for (const auto& d : set.d) grad_scale += 2.0 * set.strength * d.norm();
  const double grad_tol = 1e-13 * grad_scale;
  const double dedup = cfg.lambda_short / 20.0;

  std::vector<Minimum> found;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      Vec2 r = center + Vec2((2.0 * i / (grid - 1) - 1.0) * halfspan,
                             (2.0 * j / (grid - 1) - 1.0) * halfspan);
      bool converged = false;
      for (int iter = 0; iter < 100; ++iter) {
        const Vec2 g = potential_gradient(cfg, r);
        if (g.norm() < grad_tol) {
          converged = true;
          break;
        }
        const Eigen::Matrix2d h = potential_hessian(cfg, r);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
        Vec2 step;
        if (es.eigenvalues()(0) > 0.0) {
          step = -h.inverse() * g;
        } else {
          step = -g * (cfg.lambda_short / 20.0) / g.norm();  // walk downhill
        }
        const double max_step = cfg.lambda_short / 4.0;
        if (step.norm() > max_step) step *= max_step / step.norm();
        r += step;
      }
      if (!converged) continue;
      const Eigen::Matrix2d h = potential_hessian(cfg, r);
      const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
      if (es.eigenvalues()(0) <= 0.0) continue;  // saddle or maximum
      if (std::abs(r.x() - center.x()) > halfspan + dedup ||
          std::abs(r.y() - center.y()) > halfspan + dedup)
        continue;
      bool duplicate = false;
      for (const auto& m : found)
        if ((m.r - r).norm() < dedup) {
          duplicate = true;
          break;
        }
      if (!duplicate)
        found.push_back({r, potential(cfg, r.x(), r.y()),
                         potential_gradient(cfg, r).norm()});
    }
  }
  if (found.empty())
    throw NumericalError("no local minimum converged in the search region");
  std::sort(found.begin(), found.end(),
            [](const Minimum& a, const Minimum& b) { return a.value < b.value; });
  return found;
}

namespace {

TrioGeometry trio_at(const LatticeConfig& cfg, const Vec2& site) {
  const double a_short = 2.0 * cfg.lambda_short / 3.0;
  auto minima = find_minima(cfg, site, 1.1 * a_short, 40);
  const double depth_tol = 1e-6 * std::abs(minima.front().value);
  std::vector<Minimum> deepest;
  for (const auto& m : minima)
    if (m.value <= minima.front().value + depth_tol) deepest.push_back(m);
  if (deepest.size() != 3)
    throw NumericalError("expected a trio of degenerate global minima, found " +
                         std::to_string(deepest.size()));
  TrioGeometry trio;
  for (int i = 0; i < 3; ++i) trio.wells[i] = deepest[i].r;
  trio.center = (trio.wells[0] + trio.wells[1] + trio.wells[2]) / 3.0;
  double dmin = 0.0, dmax = 0.0, dsum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = (trio.wells[i] - trio.wells[(i + 1) % 3]).norm();
    if (i == 0 || d < dmin) dmin = d;
    if (i == 0 || d > dmax) dmax = d;
    dsum += d;
  }
  trio.intra_distance = dsum / 3.0;
  trio.distance_spread = (dmax - dmin) / trio.intra_distance;
  trio.depth = deepest.front().value;
  return trio;
}

}  // namespace

TrioGeometry trio_geometry(const LatticeConfig& cfg) {
  TrioGeometry trio = trio_at(cfg, Vec2::Zero());
  const auto [a1, a2] = long_lattice_vectors(cfg);
  TrioGeometry neighbor = trio_at(cfg, trio.center + a1);
  trio.inter_site_distance = (neighbor.center - trio.center).norm();
  return trio;
}

HarmonicFit harmonic_fit(const LatticeConfig& cfg, const Vec2& minimum,
                         double physical_scale) {
  if (physical_scale <= 0.0) throw ParameterError("physical_scale must be positive");
  const double step = cfg.lambda_short / 200.0;
  auto v = [&](double x, double y) { return potential(cfg, x, y); };
  const double x = minimum.x(), y = minimum.y();
  Eigen::Matrix2d h;
  h(0, 0) = (v(x + step, y) - 2.0 * v(x, y) + v(x - step, y)) / (step * step);
  h(1, 1) = (v(x, y + step) - 2.0 * v(x, y) + v(x, y - step)) / (step * step);
  h(0, 1) = h(1, 0) = (v(x + step, y + step) - v(x + step, y - step) -
                       v(x - step, y + step) + v(x - step, y - step)) /
                      (4.0 * step * step);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  if (es.eigenvalues()(0) <= 0.0)
    throw NotAMinimumError("Hessian is not positive definite at the given point");

  HarmonicFit fit;
  const double curv_mean = physical_scale * 0.5 * es.eigenvalues().sum();
  fit.omega_trap = std::sqrt(curv_mean / cfg.atom_mass);
  fit.width = width_from_trap_frequency(fit.omega_trap, cfg.atom_mass);
  fit.anisotropy =
      (es.eigenvalues()(1) - es.eigenvalues()(0)) / es.eigenvalues()(1);
  return fit;
}

double width_from_trap_frequency(double omega_trap, double mass) {
  if (omega_trap <= 0.0 || mass <= 0.0)
    throw ParameterError("trap frequency and mass must be positive");
  return std::sqrt(kHbar / (2.0 * mass * omega_trap));
}

ContourData contour_grid(const LatticeConfig& cfg, const Vec2& center,
                         double halfspan, int resolution) {
  if (resolution < 32) throw ParameterError("contour resolution must be at least 32");
  ContourData data;
  data.xs.resize(resolution);
  data.ys.resize(resolution);
  data.values.resize(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    data.xs[i] = center.x() + (2.0 * i / (resolution - 1) - 1.0) * halfspan;
    data.ys[i] = center.y() + (2.0 * i / (resolution - 1) - 1.0) * halfspan;
  }
  TrioGeometry trio = trio_at(cfg, center);
  const double norm = std::abs(trio.depth);
  for (int j = 0; j < resolution; ++j)
    for (int i = 0; i < resolution; ++i)
      data.values[static_cast<std::size_t>(j) * resolution + i] =
          potential(cfg, data.xs[i], data.ys[j]) / norm;

  // the two wells sharing an abscissa form the "pair"; the cut through
  // them is vertical, the cut through the remaining well horizontal
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return trio.wells[a].x() < trio.wells[b].x();
  });
  const bool pair_on_right =
      std::abs(trio.wells[idx[1]].x() - trio.wells[idx[2]].x()) <
      std::abs(trio.wells[idx[1]].x() - trio.wells[idx[0]].x());
  const double x_pair = pair_on_right
                            ? 0.5 * (trio.wells[idx[1]].x() + trio.wells[idx[2]].x())
                            : 0.5 * (trio.wells[idx[0]].x() + trio.wells[idx[1]].x());
  const int third = pair_on_right ? idx[0] : idx[2];
  const double y_third = trio.wells[third].y();

  const double cut_span = 1.2 * (2.0 * cfg.lambda_short / 3.0);
  for (int i = 0; i < resolution; ++i) {
    const double s = (2.0 * i / (resolution - 1) - 1.0) * cut_span;
    data.cut_pair_s.push_back(s);
    data.cut_pair_v.push_back(potential(cfg, x_pair, trio.center.y() + s) / norm);
    data.cut_third_s.push_back(s);
    data.cut_third_v.push_back(potential(cfg, trio.center.x() + s, y_third) / norm);
  }
  return data;
}

}  // namespace rff
