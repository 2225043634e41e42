#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "rff/errors.hpp"
#include "rff/evolution.hpp"
#include "rff/hamiltonians.hpp"
#include "rff/spin_ops.hpp"

namespace rff {

namespace {

using Mat8 = Eigen::Matrix<Complex, 8, 8>;

constexpr int kNumObs = 4;  // P, S1, S2, S3

struct TrajectoryPlan {
  Mat8 h0;
  Mat8 site_pauli[3][3];
  Mat8 obs[kNumObs];
  Mat8 rho0;
  std::vector<Vec3> offsets;  // site - centroid
  double dt = 0.0;
  double coupling = 0.0;
  std::size_t steps_per_output = 0;
  int n_output = 0;
  NoiseParams noise;
  std::uint64_t seed = 0;
};

void run_one_trajectory(const TrajectoryPlan& plan, std::uint64_t stream,
                        double* out_rows) {
  FieldProcess proc(plan.noise, plan.dt, plan.seed, stream);
  Mat8 rho = plan.rho0;
  Eigen::SelfAdjointEigenSolver<Mat8> es;

  auto record = [&](int point) {
    for (int o = 0; o < kNumObs; ++o)
      out_rows[point * kNumObs + o] = (plan.obs[o] * rho).trace().real();
  };
  record(0);

  for (int point = 1; point < plan.n_output; ++point) {
    for (std::size_t s = 0; s < plan.steps_per_output; ++s) {
      const FieldSample& field = proc.current();
      Mat8 h = plan.h0;
      for (int k = 0; k < 3; ++k) {
        const Vec3 b = plan.coupling * (field.B + field.G * plan.offsets[k]);
        h += b.x() * plan.site_pauli[k][0] + b.y() * plan.site_pauli[k][1] +
             b.z() * plan.site_pauli[k][2];
      }
      es.compute(h);
      const Eigen::Matrix<Complex, 8, 1> phases =
          (Complex(0, -1) * plan.dt * es.eigenvalues().cast<Complex>())
              .array()
              .exp();
      const Mat8 u =
          es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
      rho = u * rho * u.adjoint();
      proc.step();
    }
    record(point);
  }
}

}  // namespace

ExperimentResult stochastic_ensemble(const Vec3& s0, const StochasticConfig& cfg) {
  if (cfg.dt <= 0.0 || cfg.t_end <= 0.0)
    throw ParameterError("dt and t_end must be positive");
  if (cfg.n_output < 2) throw ParameterError("need at least two output points");
  if (cfg.n_trajectories < 1) throw ParameterError("need at least one trajectory");
  if (cfg.sites.size() != 3)
    throw ParameterError("trajectory ensemble expects three sites");
  if (cfg.dt * cfg.omega0 > 0.1 + 1e-12)
    throw ResolutionError("dt*omega0 exceeds 0.1; the bias precession is unresolved");

  TrajectoryPlan plan;
  plan.dt = cfg.dt;
  plan.coupling = cfg.noise_coupling;
  plan.noise = cfg.noise;
  plan.seed = cfg.seed;
  plan.n_output = cfg.n_output;
  plan.steps_per_output = static_cast<std::size_t>(
      std::lround(cfg.t_end / cfg.dt / (cfg.n_output - 1)));
  if (plan.steps_per_output == 0)
    throw ParameterError("output grid finer than the time step");

  Mat h0 = h_bias(cfg.omega0, 3);
  if (cfg.dd_omega != 0.0) h0 += h_dd_effective({0.0, 0.0, 0.0}, cfg.dd_omega);
  plan.h0 = h0;
  for (int k = 0; k < 3; ++k)
    for (int a = 0; a < 3; ++a)
      plan.site_pauli[k][a] = pauli_site(k + 1, static_cast<Axis>(a), 3);
  plan.obs[0] = projector_j(0.5);
  for (int i = 1; i <= 3; ++i) plan.obs[i] = sigma_rff(i);
  plan.rho0 = encode_rff(s0);
  const Vec3 c = centroid(cfg.sites);
  for (const auto& site : cfg.sites) plan.offsets.push_back(site - c);

  const int n_traj = cfg.n_trajectories;
  std::vector<double> rows(static_cast<std::size_t>(n_traj) * cfg.n_output * kNumObs);

  int n_threads = cfg.n_threads > 0
                      ? cfg.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, n_traj);

  auto worker = [&](int first, int last) {
    for (int tr = first; tr < last; ++tr)
      run_one_trajectory(plan, static_cast<std::uint64_t>(tr),
                         rows.data() + static_cast<std::size_t>(tr) * cfg.n_output *
                                           kNumObs);
  };
  if (n_threads == 1) {
    worker(0, n_traj);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n_traj + n_threads - 1) / n_threads;
    for (int th = 0; th < n_threads; ++th) {
      const int first = th * chunk, last = std::min(n_traj, first + chunk);
      if (first < last) pool.emplace_back(worker, first, last);
    }
    for (auto& th : pool) th.join();
  }

  // deterministic reduction in trajectory order
  ExperimentResult r;
  const double dt_out = cfg.dt * static_cast<double>(plan.steps_per_output);
  for (int point = 0; point < cfg.n_output; ++point) r.t.push_back(point * dt_out);

  static const char* names[kNumObs] = {"P", "S1", "S2", "S3"};
  for (int o = 0; o < kNumObs; ++o) {
    auto& mean = r.add_series(names[o]);
    auto& se = r.add_series(std::string(names[o]) + "_stderr");
    mean.resize(cfg.n_output);
    se.resize(cfg.n_output);
    for (int point = 0; point < cfg.n_output; ++point) {
      auto value = [&](int tr) {
        return rows[(static_cast<std::size_t>(tr) * cfg.n_output + point) * kNumObs + o];
      };
      double sum = 0.0;
      for (int tr = 0; tr < n_traj; ++tr) sum += value(tr);
      const double m = sum / n_traj;
      mean[point] = m;
      if (n_traj < 2) {
        se[point] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double var = 0.0;
      for (int tr = 0; tr < n_traj; ++tr) {
        const double d = value(tr) - m;
        var += d * d;
      }
      se[point] = std::sqrt(var / (n_traj - 1) / n_traj);
    }
  }

  r.meta.emplace_back("n_trajectories", std::to_string(n_traj));
  r.meta.emplace_back("seed", std::to_string(cfg.seed));
  r.meta.emplace_back("dt", std::to_string(cfg.dt));
  r.meta.emplace_back("omega0", std::to_string(cfg.omega0));
  r.meta.emplace_back("dd_omega", std::to_string(cfg.dd_omega));
  return r;
}

}  // namespace rff
