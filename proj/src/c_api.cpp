#include "svmver/svmver.h"

#include <cstring>
#include <exception>
#include <algorithm>
#include <new>
#include <optional>
#include <string>

#include "svmver/batch.hpp"
#include "svmver/error.hpp"
#include "svmver/network.hpp"
#include "svmver/svm_model.hpp"
#include "svmver/verifier.hpp"

struct svmver_model {
  svmver::SvmModel model;
  svmver::LayeredNetwork net;
};

namespace {

thread_local std::string g_last_error;

svmver_status ToStatus(svmver::ErrorCode code) {
  switch (code) {
    case svmver::ErrorCode::kIo: return SVMVER_ERR_IO;
    case svmver::ErrorCode::kParse: return SVMVER_ERR_PARSE;
    case svmver::ErrorCode::kDimension: return SVMVER_ERR_DIMENSION;
    case svmver::ErrorCode::kConstraint: return SVMVER_ERR_CONSTRAINT;
    case svmver::ErrorCode::kInvalidArgument: return SVMVER_ERR_INVALID_ARGUMENT;
  }
  return SVMVER_ERR_INTERNAL;
}

template <typename F>
svmver_status Guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SVMVER_OK;
  } catch (const svmver::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return SVMVER_ERR_INTERNAL;
}

void RequireNonNull(const void* p, const char* what) {
  if (p == nullptr) svmver::Fail(svmver::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

svmver::OptimizerConfig FromC(const svmver_optimizer_config& c) {
  svmver::OptimizerConfig cfg;
  cfg.lr_init = c.lr_init;
  cfg.lr_final = c.lr_final;
  cfg.beta1 = c.beta1;
  cfg.beta2 = c.beta2;
  cfg.epsilon = c.epsilon;
  cfg.theta = c.theta;
  cfg.max_iters = c.max_iters;
  cfg.stop_on_verdict = c.stop_on_verdict != 0;
  return cfg;
}

svmver::RunSpec FromC(const svmver_run_spec& c) {
  auto str = [](const char* s) { return s ? std::string(s) : std::string(); };
  svmver::RunSpec spec;
  spec.model_path = str(c.model_path);
  spec.images_path = str(c.images_path);
  spec.labels_path = str(c.labels_path);
  spec.samples_csv_path = str(c.samples_csv_path);
  spec.classes = {c.class_positive, c.class_negative, c.skip_unmapped != 0};
  spec.limit = c.limit;
  if (c.n_deltas > 0) RequireNonNull(c.deltas, "deltas");
  spec.deltas.assign(c.deltas, c.deltas + c.n_deltas);
  spec.scale = c.scale;
  spec.label_mode = c.label_mode == SVMVER_LABEL_GIVEN ? svmver::LabelMode::kGiven : svmver::LabelMode::kPredicted;
  spec.optimizer = FromC(c.optimizer);
  spec.workers = c.workers;
  spec.out_dir = c.out_dir ? c.out_dir : ".";
  spec.seed = c.seed;
  spec.attack_samples = c.attack_samples;
  spec.record_timing = c.record_timing != 0;
  if (c.clamp) spec.clamp = std::make_pair(c.clamp_lo, c.clamp_hi);
  return spec;
}

svmver_status Wrap(svmver::SvmModel model, svmver_model** out) {
  return Guard([&] {
    svmver::LayeredNetwork net = svmver::CompileNetwork(model);
    *out = new svmver_model{std::move(model), std::move(net)};
  });
}

}  // namespace

extern "C" {

const char* svmver_version(void) { return "1.0.0"; }

const char* svmver_last_error(void) { return g_last_error.c_str(); }

const char* svmver_status_string(svmver_status status) {
  switch (status) {
    case SVMVER_OK: return "ok";
    case SVMVER_ERR_IO: return "i/o error";
    case SVMVER_ERR_PARSE: return "parse error";
    case SVMVER_ERR_DIMENSION: return "dimension mismatch";
    case SVMVER_ERR_CONSTRAINT: return "constraint violation";
    case SVMVER_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SVMVER_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

svmver_status svmver_model_load(const char* path, svmver_model** out) {
  svmver_status st = Guard([&] {
    RequireNonNull(path, "path");
    RequireNonNull(out, "out");
    *out = nullptr;
  });
  if (st != SVMVER_OK) return st;
  std::optional<svmver::SvmModel> model;
  st = Guard([&] { model.emplace(svmver::LoadModel(path)); });
  if (st != SVMVER_OK) return st;
  return Wrap(std::move(*model), out);
}

svmver_status svmver_model_parse(const char* json_text, svmver_model** out) {
  svmver_status st = Guard([&] {
    RequireNonNull(json_text, "json_text");
    RequireNonNull(out, "out");
    *out = nullptr;
  });
  if (st != SVMVER_OK) return st;
  std::optional<svmver::SvmModel> model;
  st = Guard([&] { model.emplace(svmver::ParseModelJson(json_text)); });
  if (st != SVMVER_OK) return st;
  return Wrap(std::move(*model), out);
}

void svmver_model_free(svmver_model* model) { delete model; }

size_t svmver_model_n_features(const svmver_model* model) { return model ? model->model.n_features() : 0; }

size_t svmver_model_n_support(const svmver_model* model) { return model ? model->model.n_support() : 0; }

svmver_status svmver_model_decision_value(const svmver_model* model, const double* x, size_t n,
                                          double* out) {
  return Guard([&] {
    RequireNonNull(model, "model");
    RequireNonNull(x, "x");
    RequireNonNull(out, "out");
    *out = model->model.DecisionValue({x, n});
  });
}

svmver_status svmver_model_classify(const svmver_model* model, const double* x, size_t n, int* out) {
  return Guard([&] {
    RequireNonNull(model, "model");
    RequireNonNull(x, "x");
    RequireNonNull(out, "out");
    *out = model->model.Classify({x, n});
  });
}

svmver_status svmver_model_dump_network(const svmver_model* model, char* buffer, size_t capacity,
                                        size_t* needed) {
  return Guard([&] {
    RequireNonNull(model, "model");
    RequireNonNull(needed, "needed");
    const std::string text = model->net.DumpShape();
    *needed = text.size() + 1;
    if (buffer == nullptr || capacity < text.size() + 1) {
      svmver::Fail(svmver::ErrorCode::kInvalidArgument, "buffer too small for network dump");
    }
    std::memcpy(buffer, text.c_str(), text.size() + 1);
  });
}

void svmver_optimizer_config_default(svmver_optimizer_config* config) {
  if (config == nullptr) return;
  const svmver::OptimizerConfig d;
  *config = {d.lr_init, d.lr_final, d.beta1, d.beta2, d.epsilon, d.theta, d.max_iters, d.stop_on_verdict ? 1 : 0};
}

svmver_status svmver_verify(const svmver_model* model, const double* x, size_t n, double delta,
                            svmver_label_mode mode, int given_label,
                            const svmver_optimizer_config* config, svmver_verdict* out,
                            double* witness) {
  return Guard([&] {
    RequireNonNull(model, "model");
    RequireNonNull(x, "x");
    RequireNonNull(out, "out");
    svmver::OptimizerConfig cfg;
    if (config) cfg = FromC(*config);
    svmver::VerificationInstance inst;
    inst.x.assign(x, x + n);
    inst.delta = delta;
    inst.mode = mode == SVMVER_LABEL_GIVEN ? svmver::LabelMode::kGiven : svmver::LabelMode::kPredicted;
    inst.given_label = given_label;
    const svmver::Verdict v = svmver::Verify(model->model, model->net, inst, cfg);
    out->kind = v.kind == svmver::VerdictKind::kRobust      ? SVMVER_ROBUST
                : v.kind == svmver::VerdictKind::kFalsified ? SVMVER_FALSIFIED
                                                            : SVMVER_UNKNOWN;
    out->y_hat = v.y_hat;
    out->lower = v.lower;
    out->upper = v.upper;
    out->iterations = v.iterations;
    out->millis = v.millis;
    out->termination = svmver::TerminationName(v.reason);
    if (witness) std::copy(v.witness.begin(), v.witness.end(), witness);
  });
}

void svmver_run_spec_init(svmver_run_spec* spec) {
  if (spec == nullptr) return;
  const svmver::RunSpec d;
  std::memset(spec, 0, sizeof(*spec));
  spec->class_positive = d.classes.positive;
  spec->class_negative = d.classes.negative;
  spec->limit = d.limit;
  spec->scale = d.scale;
  spec->label_mode = SVMVER_LABEL_PREDICTED;
  svmver_optimizer_config_default(&spec->optimizer);
  spec->workers = d.workers;
  spec->out_dir = ".";
  spec->attack_samples = d.attack_samples;
  spec->record_timing = 1;
  spec->clamp_hi = 1.0;
}

svmver_status svmver_run_verify(const svmver_run_spec* spec) {
  return Guard([&] {
    RequireNonNull(spec, "spec");
    svmver::CmdVerify(FromC(*spec));
  });
}

svmver_status svmver_run_curve(const svmver_run_spec* spec) {
  return Guard([&] {
    RequireNonNull(spec, "spec");
    svmver::CmdCurve(FromC(*spec));
  });
}

}  // extern "C"
