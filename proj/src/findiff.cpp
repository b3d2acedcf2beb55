#include "geolin/findiff.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <thread>

#include "geolin/derivatives.hpp"
#include "geolin/rng.hpp"

namespace geolin {

namespace {

VecX fd_eval(const MultibodyModel& model, const SystemState& state, const VecX& tau,
             const MotionVector& gravity) {
  const Accelerations acc = forward_dynamics(model, state, tau, gravity);
  VecX out(model.dof());
  out << acc.base.vector(), acc.joints;
  return out;
}

void run_trials_parallel(int trials, const std::function<void(int)>& body) {
  const int workers = std::min(max_threads(), std::max(trials, 1));
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int t = w; t < trials; t += workers) body(t);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace

int max_threads() {
  int limit = static_cast<int>(std::thread::hardware_concurrency());
  if (limit <= 0) limit = 1;
  if (const char* env = std::getenv("GEOLIN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) limit = std::min(limit, cap);
  }
  return limit;
}

JacobianBlocks fd_forward_dynamics_jacobians(const MultibodyModel& model,
                                             const SystemState& state, const VecX& tau,
                                             const MotionVector& gravity, const FdConfig& cfg) {
  if (!(cfg.delta > 0.0)) throw std::invalid_argument("fd delta must be positive");
  const int nj = model.n_joints();
  const int n = model.dof();
  const double delta = cfg.delta;
  const bool central = cfg.scheme == FdScheme::Central;
  const double denom = central ? 2.0 * delta : delta;

  const VecX base_value = central ? VecX() : fd_eval(model, state, tau, gravity);
  const Mat6 X_A0 = velocity_transform(state.base_pose);  // frame-0 twist increments to frame A

  auto column = [&](const std::function<SystemState(double)>& perturb) -> VecX {
    const VecX plus = fd_eval(model, perturb(delta), tau, gravity);
    const VecX minus = central ? fd_eval(model, perturb(-delta), tau, gravity) : base_value;
    return (plus - minus) / denom;
  };

  JacobianBlocks out;
  out.dH.resize(n, 6);
  out.ds.resize(n, nj);
  out.dv.resize(n, 6);
  out.dr.resize(n, nj);

  for (int i = 0; i < 6; ++i) {
    out.dH.col(i) = column([&](double eps) {
      SystemState s = state;
      Vec6 xi = Vec6::Zero();
      xi[i] = eps;
      s.base_pose = state.base_pose * se3_exp(xi);
      return s;
    });
    out.dv.col(i) = column([&](double eps) {
      SystemState s = state;
      Vec6 dv0 = Vec6::Zero();
      dv0[i] = eps;
      s.base_twist = MotionVector::FromVector(state.base_twist.vector() + X_A0 * dv0);
      return s;
    });
  }
  for (int k = 0; k < nj; ++k) {
    out.ds.col(k) = column([&](double eps) {
      SystemState s = state;
      s.joint_pos[k] += eps;
      return s;
    });
    out.dr.col(k) = column([&](double eps) {
      SystemState s = state;
      s.joint_vel[k] += eps;
      return s;
    });
  }
  return out;
}

JacobianBlocks analytic_forward_dynamics_jacobians(const MultibodyModel& model,
                                                   const SystemState& state,
                                                   const MotionVector& base_acc,
                                                   const VecX& joint_acc,
                                                   const MotionVector& gravity) {
  const DynamicsWorkspace ws = eidamb(model, state, base_acc, joint_acc, gravity).workspace;
  const IdJacobians jac = id_jacobians(model, ws);
  const MatX minv = immamb(model, state.joint_pos);
  return {-minv * jac.dH, -minv * jac.ds, -minv * jac.dv, -minv * jac.dr};
}

ErrorReport error_metrics(const std::vector<JacobianBlocks>& analytic,
                          const std::vector<JacobianBlocks>& fd, double delta) {
  if (analytic.size() != fd.size()) {
    throw std::invalid_argument("error_metrics: trial sets have different sizes");
  }
  ErrorReport report;
  report.trial_count = static_cast<int>(analytic.size());
  report.delta = delta;
  report.per_trial.resize(analytic.size());
  if (analytic.empty()) return report;

  for (int idx = 0; idx < 4; ++idx) {
    MatX normalizer = MatX::Zero(analytic[0].block(idx).rows(), analytic[0].block(idx).cols());
    for (const JacobianBlocks& trial : analytic) {
      normalizer += trial.block(idx).cwiseAbs();
    }
    normalizer /= static_cast<double>(analytic.size());

    double total = 0.0;
    double worst = 0.0;
    std::int64_t entries = 0;
    for (std::size_t t = 0; t < analytic.size(); ++t) {
      const MatX diff = (analytic[t].block(idx) - fd[t].block(idx)).cwiseAbs();
      double trial_total = 0.0;
      double trial_worst = 0.0;
      for (Eigen::Index r = 0; r < diff.rows(); ++r) {
        for (Eigen::Index c = 0; c < diff.cols(); ++c) {
          double err = diff(r, c);
          if (normalizer(r, c) > 0.0) {
            err /= normalizer(r, c);
          } else if (err > 0.0) {
            report.absolute_fallback[idx] = true;
          }
          trial_total += err;
          trial_worst = std::max(trial_worst, err);
        }
      }
      report.per_trial[t].e_max[idx] = trial_worst;
      report.per_trial[t].e_avg[idx] = trial_total / static_cast<double>(diff.size());
      total += trial_total;
      worst = std::max(worst, trial_worst);
      entries += diff.size();
    }
    report.e_max[idx] = worst;
    report.e_avg[idx] = total / static_cast<double>(entries);
  }
  return report;
}

ValidationTrialPoint make_consistent_trial(const MultibodyModel& model, std::uint64_t seed,
                                           const MotionVector& gravity) {
  ValidationTrialPoint trial;
  trial.state = random_state(seed, model);
  trial.joint_acc = Rng(derive_subseed(seed, 1)).uniform_vecx(model.n_joints());

  // The consistent base acceleration is independent of the base-acceleration
  // input, so one sweep at zero suffices to find it; the consistent torques
  // need a second sweep at that acceleration.
  const EidambResult probe = eidamb(model, trial.state, MotionVector{}, trial.joint_acc, gravity);
  trial.base_acc = consistent_base_acceleration(probe.workspace);
  trial.tau = eidamb(model, trial.state, trial.base_acc, trial.joint_acc, gravity)
                  .torque.joint_torques;
  return trial;
}

ErrorReport run_validation(const MultibodyModel& model, std::uint64_t master_seed, int trials,
                           const FdConfig& cfg, const MotionVector& gravity) {
  std::vector<JacobianBlocks> analytic(trials);
  std::vector<JacobianBlocks> fd(trials);
  run_trials_parallel(trials, [&](int t) {
    const ValidationTrialPoint trial =
        make_consistent_trial(model, derive_subseed(master_seed, t), gravity);
    analytic[t] = analytic_forward_dynamics_jacobians(model, trial.state, trial.base_acc,
                                                      trial.joint_acc, gravity);
    fd[t] = fd_forward_dynamics_jacobians(model, trial.state, trial.tau, gravity, cfg);
  });
  return error_metrics(analytic, fd, cfg.delta);
}

std::vector<StudyRow> parametric_study(const MultibodyModel& model, std::uint64_t master_seed,
                                       int trials, const std::vector<double>& deltas,
                                       FdScheme scheme, const MotionVector& gravity) {
  std::vector<ValidationTrialPoint> points(trials);
  std::vector<JacobianBlocks> analytic(trials);
  run_trials_parallel(trials, [&](int t) {
    points[t] = make_consistent_trial(model, derive_subseed(master_seed, t), gravity);
    analytic[t] = analytic_forward_dynamics_jacobians(model, points[t].state, points[t].base_acc,
                                                      points[t].joint_acc, gravity);
  });

  std::vector<StudyRow> rows;
  rows.reserve(deltas.size());
  for (double delta : deltas) {
    const FdConfig cfg{delta, scheme};
    std::vector<JacobianBlocks> fd(trials);
    run_trials_parallel(trials, [&](int t) {
      fd[t] = fd_forward_dynamics_jacobians(model, points[t].state, points[t].tau, gravity, cfg);
    });
    const ErrorReport report = error_metrics(analytic, fd, delta);
    rows.push_back({delta, report.e_max, report.e_avg});
  }
  return rows;
}

}  // namespace geolin
