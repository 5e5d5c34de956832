#include "svmver/batch.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <charconv>
#include <cmath>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "svmver/error.hpp"
#include "svmver/network.hpp"

namespace svmver {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t TaskSeed(std::uint64_t seed, std::size_t sample_index, std::size_t delta_index) {
  return SplitMix64(SplitMix64(seed ^ SplitMix64(sample_index)) + delta_index);
}

std::ofstream OpenOutput(const RunSpec& spec, const char* name) {
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir, ec);
  const auto path = std::filesystem::path(spec.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

void RunSpec::Validate() const {
  if (model_path.empty()) Fail(ErrorCode::kInvalidArgument, "model path is required");
  const bool idx = !images_path.empty() || !labels_path.empty();
  if (idx && (images_path.empty() || labels_path.empty())) {
    Fail(ErrorCode::kInvalidArgument, "IDX input needs both images and labels");
  }
  if (idx == !samples_csv_path.empty()) {
    Fail(ErrorCode::kInvalidArgument, "give exactly one sample source: IDX images+labels or a samples CSV");
  }
  if (classes.positive == classes.negative) Fail(ErrorCode::kInvalidArgument, "class pair must be distinct");
  if (limit < 1) Fail(ErrorCode::kInvalidArgument, "sample limit must be >= 1");
  if (deltas.empty()) Fail(ErrorCode::kInvalidArgument, "delta list is empty");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] >= 0.0) || !std::isfinite(deltas[i])) Fail(ErrorCode::kInvalidArgument, "deltas must be finite and >= 0");
    if (i > 0 && !(deltas[i] > deltas[i - 1])) Fail(ErrorCode::kInvalidArgument, "deltas must be strictly increasing");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) Fail(ErrorCode::kInvalidArgument, "scale must be finite and > 0");
  if (workers < 1) Fail(ErrorCode::kInvalidArgument, "worker count must be >= 1");
  if (clamp && clamp->first > clamp->second) Fail(ErrorCode::kInvalidArgument, "clamp lo > hi");
  optimizer.Validate();
}

std::string RunSpec::ToJson() const {
  nlohmann::ordered_json j;
  j["model"] = model_path;
  if (!samples_csv_path.empty()) {
    j["samples_csv"] = samples_csv_path;
  } else {
    j["images"] = images_path;
    j["labels"] = labels_path;
  }
  j["classes"] = {classes.positive, classes.negative};
  j["skip_unmapped"] = classes.skip_unmapped;
  j["limit"] = limit;
  j["deltas"] = deltas;
  j["scale"] = scale;
  j["label_mode"] = label_mode == LabelMode::kPredicted ? "predicted" : "true";
  j["optimizer"] = {{"lr_init", optimizer.lr_init},   {"lr_final", optimizer.lr_final},
                    {"beta1", optimizer.beta1},       {"beta2", optimizer.beta2},
                    {"epsilon", optimizer.epsilon},   {"theta", optimizer.theta},
                    {"max_iters", optimizer.max_iters}, {"stop_on_verdict", optimizer.stop_on_verdict}};
  j["workers"] = workers;
  j["out_dir"] = out_dir;
  j["seed"] = seed;
  j["attack_samples"] = attack_samples;
  j["record_timing"] = record_timing;
  if (clamp) {
    j["clamp"] = {clamp->first, clamp->second};
  } else {
    j["clamp"] = nullptr;
  }
  return j.dump();
}

std::vector<Sample> LoadSamples(const RunSpec& spec) {
  std::vector<Sample> samples =
      spec.samples_csv_path.empty()
          ? LoadIdx(spec.images_path, spec.labels_path, spec.scale, spec.classes, spec.limit)
          : LoadSamplesCsv(spec.samples_csv_path, spec.classes, spec.limit);
  if (samples.empty()) Fail(ErrorCode::kInvalidArgument, "sample set is empty");
  return samples;
}

Report RunVerification(const SvmModel& model, const std::vector<Sample>& samples, const RunSpec& spec) {
  if (samples.empty()) Fail(ErrorCode::kInvalidArgument, "sample set is empty");
  for (const Sample& s : samples) RequireWidth(s.features.size(), model.n_features(), "sample");

  const LayeredNetwork net = CompileNetwork(model);
  const std::size_t n_delta = spec.deltas.size();
  const std::size_t n_tasks = samples.size() * n_delta;
  std::vector<SampleRecord> records(n_tasks);
  std::vector<std::exception_ptr> errors(n_tasks);
  std::atomic<std::size_t> next{0};

  auto run_task = [&](std::size_t t) {
    const Sample& s = samples[t / n_delta];
    const std::size_t di = t % n_delta;
    VerificationInstance inst;
    inst.x = s.features;
    inst.delta = spec.deltas[di];
    inst.mode = spec.label_mode;
    inst.given_label = s.label;
    if (spec.clamp) {
      inst.clamp_lo = std::vector<double>(s.features.size(), spec.clamp->first);
      inst.clamp_hi = std::vector<double>(s.features.size(), spec.clamp->second);
    }
    Verdict v = Verify(model, net, inst, spec.optimizer);
    if (v.kind == VerdictKind::kUnknown && spec.attack_samples > 0) {
      auto w = RandomAttack(model, v.y_hat, inst.ToRegion(), spec.attack_samples,
                            TaskSeed(spec.seed, s.index, di));
      if (w) {
        v.kind = VerdictKind::kFalsified;
        v.upper = v.y_hat * model.DecisionValue(*w);
        v.witness = std::move(*w);
      }
    }
    records[t] = {s.index, s.label, model.Classify(s.features), inst.delta, v.kind, v.lower, v.upper,
                  v.iterations, spec.record_timing ? v.millis : 0.0};
  };

  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < n_tasks;) {
      try {
        run_task(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };

  const std::size_t n_workers = std::min(std::max<std::size_t>(spec.workers, 1), n_tasks);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Report report;
  report.summary = Summarize(records, spec.deltas);
  report.records = std::move(records);
  return report;
}

std::vector<DeltaSummary> Summarize(const std::vector<SampleRecord>& records,
                                    const std::vector<double>& deltas) {
  std::vector<DeltaSummary> out;
  out.reserve(deltas.size());
  for (double d : deltas) {
    DeltaSummary s;
    s.delta = d;
    double iters = 0.0, ms = 0.0;
    for (const SampleRecord& r : records) {
      if (r.delta != d) continue;
      ++s.samples;
      const bool correct = r.true_label == r.predicted_label;
      const bool robust = r.verdict == VerdictKind::kRobust;
      s.correct += correct;
      s.robust += robust;
      s.robust_correct += robust && correct;
      s.falsified += r.verdict == VerdictKind::kFalsified;
      s.unknown += r.verdict == VerdictKind::kUnknown;
      iters += static_cast<double>(r.iterations);
      ms += r.millis;
    }
    if (s.samples > 0) {
      s.fraction_all = static_cast<double>(s.robust) / static_cast<double>(s.samples);
      s.mean_iterations = iters / static_cast<double>(s.samples);
      s.mean_ms = ms / static_cast<double>(s.samples);
    }
    if (s.correct > 0) s.fraction_correct = static_cast<double>(s.robust_correct) / static_cast<double>(s.correct);
    out.push_back(s);
  }
  return out;
}

void WriteResultsCsv(std::ostream& out, const Report& report) {
  out << "index,true_label,predicted_label,delta,verdict,lower_bound,upper_bound,iterations,ms\n";
  for (const SampleRecord& r : report.records) {
    out << r.index << ',' << r.true_label << ',' << r.predicted_label << ',' << FormatNumber(r.delta) << ','
        << VerdictName(r.verdict) << ',' << FormatNumber(r.lower) << ',' << FormatNumber(r.upper) << ','
        << r.iterations << ',' << FormatNumber(r.millis) << '\n';
  }
}

void WriteSummaryJson(std::ostream& out, const Report& report, const RunSpec& spec) {
  nlohmann::ordered_json j;
  j["run"] = nlohmann::ordered_json::parse(spec.ToJson());
  auto& rows = j["summary"] = nlohmann::ordered_json::array();
  for (const DeltaSummary& s : report.summary) {
    rows.push_back({{"delta", s.delta},
                    {"samples", s.samples},
                    {"correct", s.correct},
                    {"robust", s.robust},
                    {"robust_correct", s.robust_correct},
                    {"falsified", s.falsified},
                    {"unknown", s.unknown},
                    {"fraction_all", s.fraction_all},
                    {"fraction_correct", s.fraction_correct},
                    {"mean_iterations", s.mean_iterations},
                    {"mean_ms", s.mean_ms}});
  }
  out << j.dump(2) << '\n';
}

void WriteCurveCsv(std::ostream& out, const Report& report) {
  out << "delta,fraction_all,fraction_correct,mean_iterations,mean_ms\n";
  for (const DeltaSummary& s : report.summary) {
    out << FormatNumber(s.delta) << ',' << FormatNumber(s.fraction_all) << ','
        << FormatNumber(s.fraction_correct) << ',' << FormatNumber(s.mean_iterations) << ','
        << FormatNumber(s.mean_ms) << '\n';
  }
}

Report CmdVerify(const RunSpec& spec) {
  spec.Validate();
  const SvmModel model = LoadModel(spec.model_path);
  const Report report = RunVerification(model, LoadSamples(spec), spec);
  auto results = OpenOutput(spec, "results.csv");
  WriteResultsCsv(results, report);
  auto summary = OpenOutput(spec, "summary.json");
  WriteSummaryJson(summary, report, spec);
  return report;
}

Report CmdCurve(const RunSpec& spec) {
  spec.Validate();
  const SvmModel model = LoadModel(spec.model_path);
  const Report report = RunVerification(model, LoadSamples(spec), spec);
  auto curve = OpenOutput(spec, "curve.csv");
  WriteCurveCsv(curve, report);
  return report;
}

}  // namespace svmver
