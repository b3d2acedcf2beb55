#include <CLI11.hpp>
#include <string>

#include "geolin/cli.hpp"

namespace {

void add_model_options(CLI::App* cmd, geolin::RunConfig& cfg) {
  auto* model = cmd->add_option("--model", cfg.model_path, "Model document to load");
  auto* builtin = cmd->add_flag("--test-system", cfg.use_test_system,
                                "Use the built-in 9-joint validation system");
  model->excludes(builtin);
}

void add_common_options(CLI::App* cmd, geolin::RunConfig& cfg) {
  cmd->add_option("--trials", cfg.trials, "Number of random trials")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Master seed; trial t uses a splitmix64 sub-seed");
  cmd->add_option("--out", cfg.output_path, "CSV output path")->required();
}

void add_scheme_option(CLI::App* cmd, geolin::RunConfig& cfg) {
  cmd->add_option_function<std::string>(
         "--scheme",
         [&cfg](const std::string& value) {
           cfg.scheme =
               value == "central" ? geolin::FdScheme::Central : geolin::FdScheme::Forward;
         },
         "Finite-difference scheme")
      ->check(CLI::IsMember({"forward", "central"}))
      ->default_str("forward");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singularity-free linearization of moving-base multibody dynamics"};
  app.require_subcommand(1);

  geolin::RunConfig cfg;

  CLI::App* validate = app.add_subcommand(
      "validate", "Compare analytic and finite-difference linearizations on random trials");
  add_model_options(validate, cfg);
  add_common_options(validate, cfg);
  add_scheme_option(validate, cfg);
  validate->add_option("--delta", cfg.delta, "Perturbation size")->check(CLI::PositiveNumber);
  validate->add_option("--tol-avg", cfg.tol_avg, "Average-error tolerance per block");
  validate->add_option("--tol-max", cfg.tol_max, "Maximum-error tolerance per block");

  CLI::App* study = app.add_subcommand("study", "Error sweep over perturbation sizes");
  add_model_options(study, cfg);
  add_common_options(study, cfg);
  add_scheme_option(study, cfg);
  study->add_option("--deltas", cfg.deltas,
                    "Strictly descending perturbation sizes (default 1e-2..1e-12)")
      ->delimiter(',');

  CLI::App* bench = app.add_subcommand("bench", "Median wall times of the dynamics kernels");
  add_model_options(bench, cfg);
  add_common_options(bench, cfg);
  bench->add_option("--repeats", cfg.repeats, "Repeats per trial")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (validate->parsed()) cfg.command = geolin::RunConfig::Command::Validate;
  if (study->parsed()) cfg.command = geolin::RunConfig::Command::Study;
  if (bench->parsed()) cfg.command = geolin::RunConfig::Command::Bench;
  return geolin::run_command(cfg);
}
