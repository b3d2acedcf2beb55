#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "geolin/dynamics.hpp"
#include "geolin/model.hpp"

namespace geolin {

enum class FdScheme { Forward, Central };

struct FdConfig {
  double delta = 1e-6;
  FdScheme scheme = FdScheme::Forward;
};

/// Derivative blocks of the forward dynamics with respect to the four state
/// variables: dH and dv are n x 6, ds and dr are n x n_joints. The H block is
/// the left-trivialized (right-perturbation) derivative; the v block is taken
/// in the base body frame.
struct JacobianBlocks {
  MatX dH;
  MatX ds;
  MatX dv;
  MatX dr;

  const MatX& block(int idx) const {
    switch (idx) {
      case 0: return dH;
      case 1: return ds;
      case 2: return dv;
      default: return dr;
    }
  }
};

/// Geometric finite-difference approximation of the forward-dynamics
/// derivative blocks. The base pose is perturbed on the right through the
/// exponential map, H exp(delta_i^); s and r additively; the base twist by a
/// frame-0 increment mapped into the world frame. Forward differences divide
/// by delta, central differences use symmetric pairs over 2 delta.
JacobianBlocks fd_forward_dynamics_jacobians(const MultibodyModel& model,
                                             const SystemState& state, const VecX& tau,
                                             const MotionVector& gravity, const FdConfig& cfg);

/// Exact forward-dynamics derivative blocks, -M^{-1} times the
/// inverse-dynamics derivative sweeps, evaluated at the given accelerations.
JacobianBlocks analytic_forward_dynamics_jacobians(const MultibodyModel& model,
                                                   const SystemState& state,
                                                   const MotionVector& base_acc,
                                                   const VecX& joint_acc,
                                                   const MotionVector& gravity);

struct TrialErrors {
  Eigen::Vector4d e_max = Eigen::Vector4d::Zero();
  Eigen::Vector4d e_avg = Eigen::Vector4d::Zero();
};

/// Normalized error statistics between analytic and finite-difference blocks
/// over a trial set. Per block, errors are divided entrywise by the
/// over-trials average of |analytic|; entries whose normalizer vanishes fall
/// back to the absolute error and set the corresponding flag.
struct ErrorReport {
  Eigen::Vector4d e_max = Eigen::Vector4d::Zero();
  Eigen::Vector4d e_avg = Eigen::Vector4d::Zero();
  int trial_count = 0;
  double delta = 0.0;
  std::array<bool, 4> absolute_fallback{};
  std::vector<TrialErrors> per_trial;
};

ErrorReport error_metrics(const std::vector<JacobianBlocks>& analytic,
                          const std::vector<JacobianBlocks>& fd, double delta);

/// One randomized trial point of the validation protocol: state and joint
/// accelerations drawn uniformly, base acceleration and joint torques made
/// consistent so the extended inverse dynamics returns a zero base wrench.
struct ValidationTrialPoint {
  SystemState state;
  VecX joint_acc;
  MotionVector base_acc;
  VecX tau;
};

ValidationTrialPoint make_consistent_trial(const MultibodyModel& model, std::uint64_t seed,
                                           const MotionVector& gravity = default_gravity());

/// Full validation campaign: `trials` consistent random trials, analytic
/// versus finite-difference blocks, aggregated by error_metrics. Trial t uses
/// the sub-seed derive_subseed(master_seed, t). Trials may evaluate
/// concurrently (capped by the GEOLIN_THREADS environment variable);
/// aggregation order is fixed by trial index.
ErrorReport run_validation(const MultibodyModel& model, std::uint64_t master_seed, int trials,
                           const FdConfig& cfg, const MotionVector& gravity = default_gravity());

struct StudyRow {
  double delta = 0.0;
  Eigen::Vector4d e_max = Eigen::Vector4d::Zero();
  Eigen::Vector4d e_avg = Eigen::Vector4d::Zero();
};

/// Error aggregates per perturbation size, one row per delta, on a shared
/// trial set. Analytic blocks are computed once and reused across deltas.
std::vector<StudyRow> parametric_study(const MultibodyModel& model, std::uint64_t master_seed,
                                       int trials, const std::vector<double>& deltas,
                                       FdScheme scheme = FdScheme::Forward,
                                       const MotionVector& gravity = default_gravity());

/// Effective trial parallelism: hardware concurrency capped by the
/// GEOLIN_THREADS environment variable (>= 1).
int max_threads();

}  // namespace geolin
