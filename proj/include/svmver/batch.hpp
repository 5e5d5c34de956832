#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svmver/dataset.hpp"
#include "svmver/optimizer.hpp"
#include "svmver/svm_model.hpp"
#include "svmver/verifier.hpp"

namespace svmver {

struct RunSpec {
  std::string model_path;
  std::string images_path;
  std::string labels_path;
  std::string samples_csv_path;  // alternative to the IDX pair
  ClassMap classes;
  std::size_t limit = 100;
  std::vector<double> deltas{0.0};
  double scale = 1.0 / 255.0;
  LabelMode label_mode = LabelMode::kPredicted;
  OptimizerConfig optimizer;
  std::size_t workers = 1;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t attack_samples = 64;  // random_attack budget for undecided tasks; 0 disables
  bool record_timing = true;
  std::optional<std::pair<double, double>> clamp;

  void Validate() const;
  std::string ToJson() const;
};

struct SampleRecord {
  std::size_t index;
  int true_label;
  int predicted_label;
  double delta;
  VerdictKind verdict;
  double lower;
  double upper;
  std::uint64_t iterations;
  double millis;
};

struct DeltaSummary {
  double delta;
  std::size_t samples = 0;
  std::size_t correct = 0;
  std::size_t robust = 0;
  std::size_t robust_correct = 0;
  std::size_t falsified = 0;
  std::size_t unknown = 0;
  double fraction_all = 0.0;
  double fraction_correct = 0.0;
  double mean_iterations = 0.0;
  double mean_ms = 0.0;
};

/// Per-(sample, delta) records ordered by sample then delta, plus per-delta
/// aggregates.
struct Report {
  std::vector<SampleRecord> records;
  std::vector<DeltaSummary> summary;
};

std::vector<Sample> LoadSamples(const RunSpec& spec);

// Runs every (sample, delta) task on `spec.workers` threads.
Report RunVerification(const SvmModel& model, const std::vector<Sample>& samples, const RunSpec& spec);

std::vector<DeltaSummary> Summarize(const std::vector<SampleRecord>& records,
                                    const std::vector<double>& deltas);

void WriteResultsCsv(std::ostream& out, const Report& report);
void WriteSummaryJson(std::ostream& out, const Report& report, const RunSpec& spec);
void WriteCurveCsv(std::ostream& out, const Report& report);

// Full commands; write into spec.out_dir. Throw svmver::Error on failure.
Report CmdVerify(const RunSpec& spec);  // results.csv, summary.json
Report CmdCurve(const RunSpec& spec);   // curve.csv

// Shortest round-trip, locale independent.
std::string FormatNumber(double v);

}  // namespace svmver
