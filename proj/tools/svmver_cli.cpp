// svmver command line front end. Talks to the library only through svmver.h.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svmver/svmver.h"

namespace {

struct Options {
  std::string model, images, labels, samples_csv, out_dir = ".", label_mode = "predicted";
  std::vector<int> classes{0, 1};
  std::vector<double> deltas{0.0};
  std::vector<double> clamp;
  std::size_t limit = 100;
  double scale = 1.0 / 255.0;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::size_t attack_samples = 64;
  bool skip_unmapped = false;
  bool no_timing = false;
  bool no_early_stop = false;
  svmver_optimizer_config opt{};
};

void AddRunOptions(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Model JSON file")->required();
  cmd->add_option("--images", o.images, "IDX images file (magic 0x00000803)");
  cmd->add_option("--labels", o.labels, "IDX labels file (magic 0x00000801)");
  cmd->add_option("--samples-csv", o.samples_csv, "Delimited samples: label,f1,...,fn per line");
  cmd->add_option("--classes", o.classes, "Dataset labels mapped to +1,-1")->delimiter(',')->expected(2);
  cmd->add_flag("--skip-unmapped", o.skip_unmapped, "Skip samples whose label is not in --classes");
  cmd->add_option("--limit", o.limit, "Use the first N samples")->capture_default_str();
  cmd->add_option("--deltas", o.deltas, "Perturbation radii, strictly increasing")->delimiter(',');
  cmd->add_option("--scale", o.scale, "Pixel scaling factor for IDX input")->capture_default_str();
  cmd->add_option("--label-mode", o.label_mode, "predicted|true")
      ->check(CLI::IsMember({"predicted", "true"}))
      ->capture_default_str();
  cmd->add_option("--clamp", o.clamp, "Clamp the region to LO,HI per feature")->delimiter(',')->expected(2);
  cmd->add_option("--lr-init", o.opt.lr_init, "Initial step size")->capture_default_str();
  cmd->add_option("--lr-final", o.opt.lr_final, "Final step size")->capture_default_str();
  cmd->add_option("--beta1", o.opt.beta1)->capture_default_str();
  cmd->add_option("--beta2", o.opt.beta2)->capture_default_str();
  cmd->add_option("--epsilon", o.opt.epsilon)->capture_default_str();
  cmd->add_option("--max-iters", o.opt.max_iters, "Iteration budget K")->capture_default_str();
  cmd->add_option("--theta", o.opt.theta, "Gap threshold")->capture_default_str();
  cmd->add_flag("--no-early-stop", o.no_early_stop, "Keep ascending after the verdict is decided");
  cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  cmd->add_option("--attack-samples", o.attack_samples, "Random attack budget for undecided tasks (0 = off)")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for the random attack")->capture_default_str();
  cmd->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  cmd->add_flag("--no-timing", o.no_timing, "Write 0 for timings so reruns are byte-identical");
}

svmver_run_spec ToSpec(const Options& o) {
  svmver_run_spec spec;
  svmver_run_spec_init(&spec);
  spec.model_path = o.model.c_str();
  spec.images_path = o.images.empty() ? nullptr : o.images.c_str();
  spec.labels_path = o.labels.empty() ? nullptr : o.labels.c_str();
  spec.samples_csv_path = o.samples_csv.empty() ? nullptr : o.samples_csv.c_str();
  spec.class_positive = o.classes.at(0);
  spec.class_negative = o.classes.at(1);
  spec.skip_unmapped = o.skip_unmapped;
  spec.limit = o.limit;
  spec.deltas = o.deltas.data();
  spec.n_deltas = o.deltas.size();
  spec.scale = o.scale;
  spec.label_mode = o.label_mode == "true" ? SVMVER_LABEL_GIVEN : SVMVER_LABEL_PREDICTED;
  spec.optimizer = o.opt;
  spec.optimizer.stop_on_verdict = o.no_early_stop ? 0 : 1;
  spec.workers = o.workers;
  spec.out_dir = o.out_dir.c_str();
  spec.seed = o.seed;
  spec.attack_samples = o.attack_samples;
  spec.record_timing = o.no_timing ? 0 : 1;
  if (o.clamp.size() == 2) {
    spec.clamp = 1;
    spec.clamp_lo = o.clamp[0];
    spec.clamp_hi = o.clamp[1];
  }
  return spec;
}

int Report(svmver_status st) {
  if (st == SVMVER_OK) return 0;
  std::fprintf(stderr, "svmver: %s: %s\n", svmver_status_string(st), svmver_last_error());
  return static_cast<int>(st);
}

int DumpNetwork(const std::string& path) {
  svmver_model* model = nullptr;
  if (svmver_status st = svmver_model_load(path.c_str(), &model); st != SVMVER_OK) return Report(st);
  size_t needed = 0;
  svmver_model_dump_network(model, nullptr, 0, &needed);
  std::string buf(needed, '\0');
  const svmver_status st = svmver_model_dump_network(model, buf.data(), buf.size(), &needed);
  svmver_model_free(model);
  if (st != SVMVER_OK) return Report(st);
  std::printf("%s\n", buf.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness verification for kernel SVM classifiers"};
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);
  app.set_version_flag("--version", svmver_version());

  Options verify_opts, curve_opts;
  svmver_optimizer_config_default(&verify_opts.opt);
  svmver_optimizer_config_default(&curve_opts.opt);

  auto* verify = app.add_subcommand("verify", "Verify every (sample, delta); write results.csv and summary.json");
  AddRunOptions(verify, verify_opts);
  auto* curve = app.add_subcommand("curve", "Certified fraction per delta; write curve.csv");
  AddRunOptions(curve, curve_opts);
  std::string dump_model;
  auto* dump = app.add_subcommand("dump-network", "Print the compiled network shape as JSON");
  dump->add_option("--model", dump_model, "Model JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : static_cast<int>(SVMVER_ERR_INVALID_ARGUMENT);
  }

  if (*verify) {
    const svmver_run_spec spec = ToSpec(verify_opts);
    return Report(svmver_run_verify(&spec));
  }
  if (*curve) {
    const svmver_run_spec spec = ToSpec(curve_opts);
    return Report(svmver_run_curve(&spec));
  }
  if (*dump) return DumpNetwork(dump_model);
  return 1;
}
