#pragma once

// Stochastic stray magnetic field: homogeneous 3-vector B(t) plus a
// symmetric traceless gradient dyadic G(t), both stationary gaussian with
// exponential temporal correlation exp(-Γ|t-t'|).
//
// Generative model: b_k(t) = B(t) + G(t)·(r_k - r_centroid).  B has three
// independent components of standard deviation b.  G is obtained from a
// 3x3 matrix of independent Ornstein-Uhlenbeck scalars (std g·√(3/2)) by
// symmetrizing and removing the trace, which realizes the required
// component covariances: Var(diag) = g², Var(offdiag) = (3/4)g²,
// Cov(G_aa, G_bb) = -g²/2 for a ≠ b.

#include <cstdint>
#include <string>
#include <vector>

#include "rff/linalg.hpp"
#include "rff/rng.hpp"

namespace rff {

struct NoiseParams {
  double b = 5e-10;      // same-site field std per component (T, or rate units)
  double g = 1e-9;       // gradient diagonal std (T/m, or rate units / length)
  double gamma = 50.0;   // inverse correlation time Γ (1/s)
};

// Throws ParameterError for negative b/g or nonpositive gamma.  Returns a
// warning string when g·a is not small compared to b (empty otherwise).
std::string check_noise_params(const NoiseParams& p, double a = 0.0);

struct FieldSample {
  double t = 0.0;
  Vec3 B = Vec3::Zero();
  Mat3 G = Mat3::Zero();  // symmetric, traceless
};

struct FieldPath {
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<FieldSample> samples;
};

// Streaming generator behind sample_path; also used by the trajectory
// ensembles and the large statistics runs so paths never need to be
// materialized.  The discrete update is the exact OU transition kernel
// x' = x e^{-Γdt} + σ√(1-e^{-2Γdt}) ξ, so dt only limits resolution.
class FieldProcess {
 public:
  FieldProcess(const NoiseParams& params, double dt, std::uint64_t seed,
               std::uint64_t stream = 0);

  const FieldSample& current() const { return sample_; }
  const FieldSample& step();  // advance by dt

 private:
  void project();  // rebuild sample_.G from the raw 3x3 OU matrix

  NoiseParams params_;
  double dt_, decay_, kick_b_, kick_m_;
  SplitRng rng_;
  Vec3 b_raw_;
  Mat3 m_raw_;  // 9 independent OU scalars
  FieldSample sample_;
  std::uint64_t n_ = 0;
};

// Materialized path of n_steps+1 samples on the uniform grid t = 0..n·dt.
FieldPath sample_path(const NoiseParams& params, double dt, std::size_t n_steps,
                      std::uint64_t seed, std::uint64_t stream = 0);

// B + G·(r - r_centroid)
Vec3 field_at_site(const FieldSample& sample, const Vec3& r, const Vec3& r_centroid);

enum class CorrelationKind {
  DifferenceField,  // <v1·(b_k-b_l)(t) (b_k-b_l)(t+lag)·v2>
  CrossSite,        // <v1·b_k(t) b_l(t+lag)·v2>, k ≠ l separated by r_kl
  SameSite,         // r_kl = 0 limit of the cross-site form
};

// Closed-form two-time correlators of the noise model; used as the oracle
// by the statistical validator.
double theoretical_correlation(const NoiseParams& params, CorrelationKind kind,
                               const Vec3& r_kl, double lag, const Vec3& v1,
                               const Vec3& v2);

struct StatCheck {
  std::string name;
  double empirical = 0.0;
  double expected = 0.0;
  double stderr_est = 0.0;
  double z = 0.0;
  bool pass = false;
};

struct StatReport {
  std::vector<StatCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string summary() const;
};

// Accumulates single-pass statistics of a field path: component means and
// variances of B and G, exactness of the Maxwell constraints, and lagged
// autocovariances of the difference field across the first two sites.
class NoiseAccumulator {
 public:
  // lag indices are multiples of dt; sites give the difference vector r_kl
  NoiseAccumulator(const NoiseParams& params, double dt,
                   std::vector<Vec3> sites, std::vector<std::size_t> lag_steps);

  void add(const FieldSample& sample);
  std::size_t count() const { return n_; }

  // z_threshold: pass/fail cut on |empirical - expected| / stderr for the
  // mean/covariance checks; ratio checks use a 5% relative band.
  StatReport report(double z_threshold = 5.0) const;

 private:
  NoiseParams params_;
  double dt_;
  std::vector<Vec3> sites_;
  std::vector<std::size_t> lags_;
  std::size_t n_ = 0;

  Vec3 sum_b_ = Vec3::Zero();
  double sum_diag_sq_ = 0.0, sum_off_sq_ = 0.0;
  double max_asym_ = 0.0, max_trace_ = 0.0, max_g_ = 0.0;
  // difference-field components v1·G·r_kl for v1 = x̂ (parallel) and ŷ (⊥)
  std::vector<double> ring_par_, ring_perp_;
  std::vector<double> sum_lag_par_, sum_lag_perp_;
  std::vector<std::size_t> n_lag_;
};

// Convenience wrappers.  The path-based form materializes nothing extra;
// the streaming form generates n_steps samples on the fly.
StatReport validate_statistics(const FieldPath& path, const NoiseParams& params,
                               const std::vector<Vec3>& sites,
                               double z_threshold = 5.0);
StatReport validate_statistics_streaming(const NoiseParams& params, double dt,
                                         std::size_t n_steps, std::uint64_t seed,
                                         const std::vector<Vec3>& sites,
                                         double z_threshold = 5.0);

// Centroid of a site list.
Vec3 centroid(const std::vector<Vec3>& sites);

// Path dump: columns t, Bx, By, Bz, Gxx, Gxy, Gxz, Gyy, Gyz (Gzz is
// implied by tracelessness).  Lines starting with '#' carry the manifest.
void write_path_csv(const FieldPath& path, std::ostream& os,
                    const std::vector<std::pair<std::string, std::string>>& manifest = {});

}  // namespace rff
