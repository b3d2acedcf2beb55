#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geolin/findiff.hpp"

namespace geolin {

/// Configuration of one CLI run. Exactly one of use_test_system / model_path
/// selects the model.
struct RunConfig {
  enum class Command { Validate, Study, Bench };

  Command command = Command::Validate;
  bool use_test_system = false;
  std::string model_path;
  int trials = 100;
  std::uint64_t seed = 42;
  double delta = 1e-6;
  std::vector<double> deltas;  // study sweep, strictly descending
  FdScheme scheme = FdScheme::Forward;
  std::string output_path;
  double tol_avg = 1e-3;
  double tol_max = 1e-2;
  int repeats = 25;  // bench repeats per trial
};

/// Default study sweep, 1e-2 down to 1e-12.
std::vector<double> default_study_deltas();

/// Random-trial validation against the finite-difference oracle; writes
/// per-trial and aggregate error rows as CSV. Returns 0 when the aggregate
/// errors are within the configured tolerances, 1 on a tolerance breach, 2 on
/// I/O, parse, or configuration failure (nothing is written in that case).
int cmd_validate(const RunConfig& cfg);

/// Parametric study over the delta sweep; one CSV row per delta. Returns 0
/// when every error series attains its minimum at an interior delta (checked
/// for sweeps of at least three deltas), 1 otherwise, 2 on I/O or
/// configuration failure.
int cmd_study(const RunConfig& cfg);

/// Micro-benchmark of the dynamics kernels; writes one CSV row per operation
/// with the median wall time over repeats x trials. Returns 0 on success, 2
/// on I/O or configuration failure.
int cmd_bench(const RunConfig& cfg);

/// Dispatch on cfg.command.
int run_command(const RunConfig& cfg);

}  // namespace geolin
