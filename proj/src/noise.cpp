#include "rff/noise.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "rff/errors.hpp"

namespace rff {

std::string check_noise_params(const NoiseParams& p, double a) {
  if (p.b < 0.0 || p.g < 0.0)
    throw ParameterError("noise stds b, g must be nonnegative");
  if (p.gamma <= 0.0) throw ParameterError("noise gamma must be positive");
  if (a > 0.0 && p.b > 0.0 && p.g * a > 0.1 * p.b) {
    std::ostringstream os;
    os << "gradient scale g*a = " << p.g * a
       << " is not small compared to b = " << p.b;
    return os.str();
  }
  return {};
}

FieldProcess::FieldProcess(const NoiseParams& params, double dt,
                           std::uint64_t seed, std::uint64_t stream)
    : params_(params), dt_(dt), rng_(seed, stream) {
  check_noise_params(params);
  if (dt <= 0.0) throw ParameterError("dt must be positive");
  if (dt * params.gamma > 0.1)
    throw ResolutionError("dt*gamma exceeds 0.1; the path cannot resolve the noise");

  decay_ = std::exp(-params.gamma * dt);
  const double renew = std::sqrt(1.0 - decay_ * decay_);
  const double sigma_m = params.g * std::sqrt(1.5);
  kick_b_ = params.b * renew;
  kick_m_ = sigma_m * renew;

  // draw the initial sample from the stationary distribution
  for (int i = 0; i < 3; ++i) b_raw_(i) = params.b * rng_.gaussian();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m_raw_(i, j) = sigma_m * rng_.gaussian();
  project();
}

void FieldProcess::project() {
  sample_.t = static_cast<double>(n_) * dt_;
  sample_.B = b_raw_;
  Mat3 s = 0.5 * (m_raw_ + m_raw_.transpose());
  const double tr3 = s.trace() / 3.0;
  for (int i = 0; i < 3; ++i) s(i, i) -= tr3;
  sample_.G = s;
}

const FieldSample& FieldProcess::step() {
  for (int i = 0; i < 3; ++i)
    b_raw_(i) = b_raw_(i) * decay_ + kick_b_ * rng_.gaussian();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m_raw_(i, j) = m_raw_(i, j) * decay_ + kick_m_ * rng_.gaussian();
  ++n_;
  project();
  return sample_;
}

FieldPath sample_path(const NoiseParams& params, double dt, std::size_t n_steps,
                      std::uint64_t seed, std::uint64_t stream) {
  FieldProcess proc(params, dt, seed, stream);
  FieldPath path;
  path.dt = dt;
  path.seed = seed;
  path.stream = stream;
  path.samples.reserve(n_steps + 1);
  path.samples.push_back(proc.current());
  for (std::size_t i = 0; i < n_steps; ++i) path.samples.push_back(proc.step());
  return path;
}

Vec3 field_at_site(const FieldSample& sample, const Vec3& r, const Vec3& r_centroid) {
  return sample.B + sample.G * (r - r_centroid);
}

Vec3 centroid(const std::vector<Vec3>& sites) {
  Vec3 c = Vec3::Zero();
  for (const auto& s : sites) c += s;
  return c / static_cast<double>(sites.size());
}

double theoretical_correlation(const NoiseParams& params, CorrelationKind kind,
                               const Vec3& r_kl, double lag, const Vec3& v1,
                               const Vec3& v2) {
  const double decay = std::exp(-params.gamma * std::abs(lag));
  const double g2 = params.g * params.g;
  const double angular =
      3.0 * v1.dot(v2) * r_kl.squaredNorm() + v1.dot(r_kl) * r_kl.dot(v2);
  switch (kind) {
    case CorrelationKind::DifferenceField:
      return 0.25 * g2 * decay * angular;
    case CorrelationKind::CrossSite:
      return decay * (params.b * params.b * v1.dot(v2) - 0.125 * g2 * angular);
    case CorrelationKind::SameSite:
      return params.b * params.b * v1.dot(v2) * decay;
  }
  return 0.0;
}

namespace {

Vec3 any_orthogonal_unit(const Vec3& v) {
  Vec3 axis = std::abs(v.x()) <= std::abs(v.y()) && std::abs(v.x()) <= std::abs(v.z())
                  ? Vec3::UnitX()
                  : (std::abs(v.y()) <= std::abs(v.z()) ? Vec3::UnitY() : Vec3::UnitZ());
  Vec3 u = v.cross(axis);
  return u / u.norm();
}

}  // namespace

NoiseAccumulator::NoiseAccumulator(const NoiseParams& params, double dt,
                                   std::vector<Vec3> sites,
                                   std::vector<std::size_t> lag_steps)
    : params_(params), dt_(dt), sites_(std::move(sites)), lags_(std::move(lag_steps)) {
  if (sites_.size() < 2)
    throw ParameterError("noise statistics need at least two sites");
  std::size_t max_lag = 0;
  for (auto l : lags_) max_lag = std::max(max_lag, l);
  ring_par_.assign(max_lag + 1, 0.0);
  ring_perp_.assign(max_lag + 1, 0.0);
  sum_lag_par_.assign(lags_.size(), 0.0);
  sum_lag_perp_.assign(lags_.size(), 0.0);
  n_lag_.assign(lags_.size(), 0);
}

void NoiseAccumulator::add(const FieldSample& s) {
  sum_b_ += s.B;
  for (int i = 0; i < 3; ++i) sum_diag_sq_ += s.G(i, i) * s.G(i, i);
  sum_off_sq_ += s.G(0, 1) * s.G(0, 1) + s.G(0, 2) * s.G(0, 2) +
                 s.G(1, 2) * s.G(1, 2) + s.G(1, 0) * s.G(1, 0) +
                 s.G(2, 0) * s.G(2, 0) + s.G(2, 1) * s.G(2, 1);
  max_asym_ = std::max(max_asym_, (s.G - s.G.transpose()).cwiseAbs().maxCoeff());
  max_trace_ = std::max(max_trace_, std::abs(s.G.trace()));
  max_g_ = std::max(max_g_, s.G.cwiseAbs().maxCoeff());

  const Vec3 r_kl = sites_[0] - sites_[1];
  const Vec3 v_par = r_kl / r_kl.norm();
  const Vec3 v_perp = any_orthogonal_unit(r_kl);
  const Vec3 diff = s.G * r_kl;
  const std::size_t ring = ring_par_.size();
  ring_par_[n_ % ring] = v_par.dot(diff);
  ring_perp_[n_ % ring] = v_perp.dot(diff);
  for (std::size_t li = 0; li < lags_.size(); ++li) {
    if (n_ >= lags_[li]) {
      const std::size_t past = (n_ - lags_[li]) % ring;
      sum_lag_par_[li] += ring_par_[n_ % ring] * ring_par_[past];
      sum_lag_perp_[li] += ring_perp_[n_ % ring] * ring_perp_[past];
      ++n_lag_[li];
    }
  }
  ++n_;
}

StatReport NoiseAccumulator::report(double z_threshold) const {
  const double duration = static_cast<double>(n_) * dt_;
  if (n_ < 1000 || duration * params_.gamma < 10.0)
    throw InsufficientDataError(
        "path too short for statistics: need at least 1000 samples spanning "
        "10 correlation times, got " +
        std::to_string(n_) + " samples over " +
        std::to_string(duration * params_.gamma) + " correlation times");

  StatReport rep;
  const double nd = static_cast<double>(n_);

  // mean of B vanishes; stderr of an OU time average over T is b*sqrt(2/(Γ T))
  const double mean_stderr = params_.b * std::sqrt(2.0 / (params_.gamma * duration));
  for (int i = 0; i < 3; ++i) {
    StatCheck c;
    c.name = std::string("mean_B") + "xyz"[i];
    c.empirical = sum_b_(i) / nd;
    c.expected = 0.0;
    c.stderr_est = mean_stderr;
    c.z = mean_stderr > 0.0 ? std::abs(c.empirical) / mean_stderr : 0.0;
    c.pass = params_.b == 0.0 ? c.empirical == 0.0 : c.z < z_threshold;
    rep.checks.push_back(c);
  }

  // Maxwell constraints hold sample by sample
  {
    const double scale = std::max(max_g_, params_.g);
    StatCheck c;
    c.name = "G_symmetric";
    c.empirical = max_asym_;
    c.pass = scale == 0.0 ? max_asym_ == 0.0 : max_asym_ < 1e-14 * scale;
    rep.checks.push_back(c);
    c.name = "G_traceless";
    c.empirical = max_trace_;
    c.pass = scale == 0.0 ? max_trace_ == 0.0 : max_trace_ < 1e-14 * scale;
    rep.checks.push_back(c);
  }

  // diagonal/offdiagonal variance ratio 4/3, within a relative band
  if (params_.g > 0.0) {
    StatCheck c;
    c.name = "var_ratio_diag_offdiag";
    const double var_diag = sum_diag_sq_ / (3.0 * nd);
    const double var_off = sum_off_sq_ / (6.0 * nd);
    c.empirical = var_diag / var_off;
    c.expected = 4.0 / 3.0;
    c.stderr_est = c.expected * std::sqrt(4.0 / (params_.gamma * dt_) / nd);
    c.z = std::abs(c.empirical - c.expected) / c.stderr_est;
    c.pass = std::abs(c.empirical - c.expected) < 0.05 * c.expected;
    rep.checks.push_back(c);
  }

  // lagged autocovariance of the difference field, parallel and
  // perpendicular to r_kl, against the closed forms
  const Vec3 r_kl = sites_[0] - sites_[1];
  const Vec3 v_par = r_kl / r_kl.norm();
  const Vec3 v_perp = any_orthogonal_unit(r_kl);
  const double c0_par = theoretical_correlation(
      params_, CorrelationKind::DifferenceField, r_kl, 0.0, v_par, v_par);
  const double c0_perp = theoretical_correlation(
      params_, CorrelationKind::DifferenceField, r_kl, 0.0, v_perp, v_perp);
  const double corr_samples = 1.0 / (params_.gamma * dt_);
  for (std::size_t li = 0; li < lags_.size(); ++li) {
    const double lag_t = static_cast<double>(lags_[li]) * dt_;
    for (int dir = 0; dir < 2; ++dir) {
      StatCheck c;
      c.name = (dir == 0 ? "diff_autocov_par_lag" : "diff_autocov_perp_lag") +
               std::to_string(lags_[li]);
      const double sum = dir == 0 ? sum_lag_par_[li] : sum_lag_perp_[li];
      const Vec3& v = dir == 0 ? v_par : v_perp;
      c.empirical = n_lag_[li] > 0 ? sum / static_cast<double>(n_lag_[li]) : 0.0;
      c.expected = theoretical_correlation(params_, CorrelationKind::DifferenceField,
                                           r_kl, lag_t, v, v);
      const double c0 = dir == 0 ? c0_par : c0_perp;
      c.stderr_est = c0 * std::sqrt(2.0 * corr_samples / nd) * M_SQRT2;
      if (params_.g == 0.0) {
        c.pass = c.empirical == 0.0;
      } else {
        c.z = std::abs(c.empirical - c.expected) / c.stderr_est;
        // 5% relative band with a statistical floor for deep lags
        c.pass = std::abs(c.empirical - c.expected) <
                 std::max(0.05 * std::abs(c.expected), z_threshold * c.stderr_est / 5.0);
      }
      rep.checks.push_back(c);
    }
  }
  return rep;
}

std::string StatReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.pass ? "[pass] " : "[FAIL] ") << c.name << ": empirical=" << c.empirical;
    if (c.expected != 0.0 || c.stderr_est != 0.0)
      os << " expected=" << c.expected << " stderr=" << c.stderr_est << " z=" << c.z;
    os << "\n";
  }
  return os.str();
}

StatReport validate_statistics(const FieldPath& path, const NoiseParams& params,
                               const std::vector<Vec3>& sites, double z_threshold) {
  if (path.samples.empty())
    throw InsufficientDataError("empty field path");
  const std::size_t lag1 =
      static_cast<std::size_t>(std::lround(1.0 / (params.gamma * path.dt)));
  NoiseAccumulator acc(params, path.dt, sites, {0, lag1, 2 * lag1});
  for (const auto& s : path.samples) acc.add(s);
  return acc.report(z_threshold);
}

StatReport validate_statistics_streaming(const NoiseParams& params, double dt,
                                         std::size_t n_steps, std::uint64_t seed,
                                         const std::vector<Vec3>& sites,
                                         double z_threshold) {
  if (n_steps == 0) throw InsufficientDataError("empty field path");
  const std::size_t lag1 =
      static_cast<std::size_t>(std::lround(1.0 / (params.gamma * dt)));
  NoiseAccumulator acc(params, dt, sites, {0, lag1, 2 * lag1});
  FieldProcess proc(params, dt, seed);
  acc.add(proc.current());
  for (std::size_t i = 0; i < n_steps; ++i) acc.add(proc.step());
  return acc.report(z_threshold);
}

void write_path_csv(const FieldPath& path, std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& manifest) {
  for (const auto& [k, v] : manifest) os << "# " << k << " = " << v << "\n";
  os << "t,Bx,By,Bz,Gxx,Gxy,Gxz,Gyy,Gyz\n";
  os.precision(17);
  for (const auto& s : path.samples) {
    os << s.t << ',' << s.B.x() << ',' << s.B.y() << ',' << s.B.z() << ','
       << s.G(0, 0) << ',' << s.G(0, 1) << ',' << s.G(0, 2) << ',' << s.G(1, 1)
       << ',' << s.G(1, 2) << "\n";
  }
}

}  // namespace rff
