#include "geolin/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "geolin/derivatives.hpp"
#include "geolin/linearization.hpp"
#include "geolin/rng.hpp"

namespace geolin {

namespace {

// Scientific notation with 17 significant digits, so values survive a
// text round trip bit-exactly.
std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

MultibodyModel select_model(const RunConfig& cfg) {
  if (cfg.use_test_system) return build_test_system();
  if (cfg.model_path.empty()) {
    throw std::runtime_error("no model selected; pass --model or --test-system");
  }
  return load_model_file(cfg.model_path);
}

void check_common(const RunConfig& cfg) {
  if (cfg.trials < 1) throw std::runtime_error("trials must be >= 1");
  if (cfg.output_path.empty()) throw std::runtime_error("no output path; pass --out");
}

int write_output(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return 2;
  }
  out << contents;
  if (!out) {
    std::cerr << "error: failed writing output file: " << path << "\n";
    return 2;
  }
  return 0;
}

void append_errors(std::ostringstream& row, const Eigen::Vector4d& e_max,
                   const Eigen::Vector4d& e_avg) {
  for (int i = 0; i < 4; ++i) row << "," << format_value(e_max[i]);
  for (int i = 0; i < 4; ++i) row << "," << format_value(e_avg[i]);
}

}  // namespace

std::vector<double> default_study_deltas() {
  std::vector<double> deltas;
  for (int e = 2; e <= 12; ++e) deltas.push_back(std::pow(10.0, -e));
  return deltas;
}

int cmd_validate(const RunConfig& cfg) {
  MultibodyModel model;
  try {
    check_common(cfg);
    if (!(cfg.delta > 0.0)) throw std::runtime_error("delta must be positive");
    model = select_model(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const ErrorReport report =
      run_validation(model, cfg.seed, cfg.trials, FdConfig{cfg.delta, cfg.scheme});

  std::ostringstream csv;
  csv << "record,trial,delta,e_max_1,e_max_2,e_max_3,e_max_4,e_avg_1,e_avg_2,e_avg_3,e_avg_4\n";
  for (int t = 0; t < report.trial_count; ++t) {
    csv << "trial," << t << "," << format_value(cfg.delta);
    append_errors(csv, report.per_trial[t].e_max, report.per_trial[t].e_avg);
    csv << "\n";
  }
  csv << "aggregate," << report.trial_count << "," << format_value(cfg.delta);
  append_errors(csv, report.e_max, report.e_avg);
  csv << "\n";

  if (const int rc = write_output(cfg.output_path, csv.str())) return rc;

  const bool ok = report.e_avg.maxCoeff() <= cfg.tol_avg && report.e_max.maxCoeff() <= cfg.tol_max;
  std::cout << "validate: trials=" << report.trial_count << " delta=" << cfg.delta
            << " e_max=" << report.e_max.transpose() << " e_avg=" << report.e_avg.transpose()
            << (ok ? " [ok]" : " [tolerance breach]") << "\n";
  return ok ? 0 : 1;
}

int cmd_study(const RunConfig& cfg) {
  MultibodyModel model;
  std::vector<double> deltas = cfg.deltas;
  try {
    check_common(cfg);
    if (deltas.empty()) deltas = default_study_deltas();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (!(deltas[i] > 0.0)) throw std::runtime_error("deltas must be positive");
      if (i > 0 && deltas[i] >= deltas[i - 1]) {
        throw std::runtime_error("deltas must be strictly descending");
      }
    }
    model = select_model(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::vector<StudyRow> rows =
      parametric_study(model, cfg.seed, cfg.trials, deltas, cfg.scheme);

  std::ostringstream csv;
  csv << "delta,e_max_1,e_max_2,e_max_3,e_max_4,e_avg_1,e_avg_2,e_avg_3,e_avg_4\n";
  for (const StudyRow& row : rows) {
    csv << format_value(row.delta);
    append_errors(csv, row.e_max, row.e_avg);
    csv << "\n";
  }
  if (const int rc = write_output(cfg.output_path, csv.str())) return rc;

  // U-shape check: every error series must bottom out at an interior delta.
  bool interior_min = true;
  if (rows.size() >= 3) {
    for (int idx = 0; idx < 4 && interior_min; ++idx) {
      for (int metric = 0; metric < 2 && interior_min; ++metric) {
        std::size_t argmin = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const double v = metric == 0 ? rows[r].e_max[idx] : rows[r].e_avg[idx];
          if (v < best) {
            best = v;
            argmin = r;
          }
        }
        if (argmin == 0 || argmin + 1 == rows.size()) interior_min = false;
      }
    }
  }
  std::cout << "study: " << rows.size() << " deltas, "
            << (interior_min ? "interior minimum" : "minimum at sweep boundary") << "\n";
  return interior_min ? 0 : 1;
}

int cmd_bench(const RunConfig& cfg) {
  MultibodyModel model;
  try {
    check_common(cfg);
    if (cfg.repeats < 1) throw std::runtime_error("repeats must be >= 1");
    model = select_model(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  using Clock = std::chrono::steady_clock;
  const char* names[7] = {"eidamb", "did_dH", "did_ds", "did_dv", "did_dr", "immamb", "linearize"};
  std::vector<std::vector<double>> samples(7);

  for (int t = 0; t < cfg.trials; ++t) {
    const ValidationTrialPoint trial = make_consistent_trial(model, derive_subseed(cfg.seed, t));
    const DynamicsWorkspace ws =
        eidamb(model, trial.state, trial.base_acc, trial.joint_acc).workspace;

    auto time_op = [&](int op, auto&& fn) {
      for (int rep = 0; rep < cfg.repeats; ++rep) {
        const auto start = Clock::now();
        fn();
        const auto stop = Clock::now();
        samples[op].push_back(std::chrono::duration<double>(stop - start).count());
      }
    };
    time_op(0, [&] { eidamb(model, trial.state, trial.base_acc, trial.joint_acc); });
    time_op(1, [&] { did_dH(model, ws); });
    time_op(2, [&] { did_ds(model, ws, trial.base_acc, trial.joint_acc); });
    time_op(3, [&] { did_dv(model, ws); });
    time_op(4, [&] { did_dr(model, ws); });
    time_op(5, [&] { immamb(model, trial.state.joint_pos); });
    time_op(6, [&] { linearize(model, trial.state, trial.tau); });
  }

  std::ostringstream csv;
  csv << "operation,median_seconds,repeats,trials\n";
  for (int op = 0; op < 7; ++op) {
    std::vector<double>& s = samples[op];
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    csv << names[op] << "," << format_value(s[s.size() / 2]) << "," << cfg.repeats << ","
        << cfg.trials << "\n";
  }
  return write_output(cfg.output_path, csv.str());
}

int run_command(const RunConfig& cfg) {
  switch (cfg.command) {
    case RunConfig::Command::Validate: return cmd_validate(cfg);
    case RunConfig::Command::Study: return cmd_study(cfg);
    case RunConfig::Command::Bench: return cmd_bench(cfg);
  }
  return 2;
}

}  // namespace geolin
