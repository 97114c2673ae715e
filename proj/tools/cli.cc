/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.h"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "footprint/error.h"
#include "footprint/evaluation.h"
#include "footprint/gradient_check.h"
#include "footprint/image_io.h"
#include "footprint/metrics_io.h"
#include "footprint/propagation.h"
#include "footprint/random.h"
#include "footprint/sequence_io.h"
#include "footprint/synth.h"
#include "json.hpp"

namespace footprint::cli {
namespace {

namespace fs = std::filesystem;
using propagation::PropagationParams;

// Flags shared across subcommands; each subcommand reads the subset it binds.
struct RunConfig {
  std::string input;
  std::string output;
  PropagationParams params;
  std::optional<double> support_radius;
  double threshold = eval::kDefaultThreshold;
  int window = eval::kDefaultWindow;
  double epsilon = eval::kDefaultKlEpsilon;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string format;

  std::vector<std::string> score_paths;
  std::vector<std::string> gt_paths;
  std::string pred_path;
  std::string gt_path;
  std::string semantic_path;
  int num_classes = 0;
  std::size_t samples = 10000;
  int trials = 100;
};

std::shared_ptr<spdlog::logger> Logger() {
  static const std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_color_mt("footprint");
    const char* env = std::getenv("FOOTPRINT_LOG");
    l->set_level(env != nullptr ? spdlog::level::from_str(env) : spdlog::level::warn);
    l->set_pattern("[%l] %v");
    return l;
  }();
  return logger;
}

std::string FrameFileName(const std::string& sequence_id, std::int64_t frame_index,
                          const char* extension) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "_%06lld.", static_cast<long long>(frame_index));
  return sequence_id + buf + extension;
}

// Runs fn(i) for i in [0, n) on `jobs` threads. Each index is handled by one
// worker; the first failure in index order is rethrown after all finish.
template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void EnsureDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create directory " + dir.string());
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

nlohmann::json ParamsJson(const PropagationParams& p) {
  return {{"sigma", p.sigma},
          {"downsample", p.downsample},
          {"support_radius", p.SupportRadius()},
          {"z_min", p.z_min}};
}

nlohmann::json DiagnosticsJson(std::int64_t frame, const propagation::PropagationDiagnostics& d,
                               bool with_stationary) {
  nlohmann::json j = {{"frame_index", frame},
                      {"splatted", d.splatted},
                      {"behind_camera", d.behind_camera},
                      {"off_grid", d.off_grid}};
  if (with_stationary) j["stationary"] = d.stationary;
  return j;
}

PropagationParams EffectiveParams(const RunConfig& cfg) {
  PropagationParams p = cfg.params;
  p.support_radius = cfg.support_radius;
  p.Validate();
  return p;
}

int Propagate(const RunConfig& cfg) {
  const Sequence seq = io::ReadSequenceFile(cfg.input);
  const PropagationParams params = EffectiveParams(cfg);
  const io::HeatmapFormat format =
      cfg.format == "png" ? io::HeatmapFormat::kPng8 : io::HeatmapFormat::kPgm16;
  const char* extension = cfg.format == "png" ? "png" : "pgm";
  const fs::path out_dir(cfg.output);
  EnsureDirectory(out_dir);

  std::vector<propagation::PropagationDiagnostics> diagnostics(seq.frames.size());
  ParallelFor(seq.frames.size(), cfg.jobs, [&](std::size_t i) {
    const std::int64_t ref = seq.frames[i].frame_index;
    const propagation::FootprintMap map = propagation::PropagateFootprints(seq, ref, params);
    io::WriteHeatmap(map.grid, out_dir / FrameFileName(seq.sequence_id, ref, extension), format);
    diagnostics[i] = map.diagnostics;
  });

  nlohmann::json report = {{"sequence_id", seq.sequence_id},
                           {"params", ParamsJson(params)},
                           {"frames", nlohmann::json::array()}};
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    report["frames"].push_back(DiagnosticsJson(seq.frames[i].frame_index, diagnostics[i], false));
  }
  WriteText(out_dir / "diagnostics.json", report.dump(2) + "\n");
  Logger()->info("propagated {} frames of '{}' into {}", seq.frames.size(), seq.sequence_id,
                 out_dir.string());
  return kExitOk;
}

int Directions(const RunConfig& cfg) {
  const Sequence seq = io::ReadSequenceFile(cfg.input);
  const PropagationParams params = EffectiveParams(cfg);
  const fs::path out_dir(cfg.output);
  EnsureDirectory(out_dir);

  std::vector<propagation::PropagationDiagnostics> diagnostics(seq.frames.size());
  ParallelFor(seq.frames.size(), cfg.jobs, [&](std::size_t i) {
    const std::int64_t ref = seq.frames[i].frame_index;
    const propagation::DirectionResult result = propagation::PropagateDirections(seq, ref, params);
    io::WriteDirectionPfm(result.map, out_dir / FrameFileName(seq.sequence_id, ref, "pfm"));
    diagnostics[i] = result.diagnostics;
  });

  nlohmann::json report = {{"sequence_id", seq.sequence_id},
                           {"params", ParamsJson(params)},
                           {"frames", nlohmann::json::array()}};
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    report["frames"].push_back(DiagnosticsJson(seq.frames[i].frame_index, diagnostics[i], true));
  }
  WriteText(out_dir / "diagnostics.json", report.dump(2) + "\n");
  return kExitOk;
}

void EmitReport(const eval::MetricsReport& report, const RunConfig& cfg) {
  const io::MetricsFormat format =
      cfg.format == "csv" ? io::MetricsFormat::kCsv : io::MetricsFormat::kJson;
  if (cfg.output.empty()) {
    std::cout << (format == io::MetricsFormat::kCsv ? io::MetricsToCsv(report)
                                                    : io::MetricsToJson(report));
  } else {
    io::WriteMetrics(report, cfg.output, format);
  }
}

int EvalExpansion(const RunConfig& cfg) {
  const io::DecodedHeatmap pred = io::ReadHeatmap(cfg.pred_path);
  const io::DecodedHeatmap gt = io::ReadHeatmap(cfg.gt_path);
  const BinaryMap pred_bin = eval::Threshold(pred.values, cfg.threshold);
  const BinaryMap gt_bin = propagation::Binarize(gt.values);
  EmitReport(eval::ExpansionMetrics(pred_bin, gt_bin), cfg);
  return kExitOk;
}

int EvalMap(const RunConfig& cfg) {
  if (cfg.score_paths.size() != cfg.gt_paths.size()) {
    throw Error(ErrorCode::kInvalidArgument, "--scores and --gt must be given the same number of times");
  }
  std::vector<std::pair<ScoreMap, BinaryMap>> images;
  for (std::size_t i = 0; i < cfg.score_paths.size(); ++i) {
    images.emplace_back(io::ReadHeatmap(cfg.score_paths[i]).values,
                        propagation::Binarize(io::ReadHeatmap(cfg.gt_paths[i]).values));
  }
  eval::MetricsReport report;
  report.map = eval::MeanAveragePrecision(images);
  EmitReport(report, cfg);
  return kExitOk;
}

int EvalKl(const RunConfig& cfg) {
  const ScoreMap pred = io::ReadHeatmap(cfg.pred_path).values;
  const ScoreMap gt = io::ReadHeatmap(cfg.gt_path).values;
  eval::SemanticMap semantic;
  semantic.labels = io::ReadPgmSamples(cfg.semantic_path);
  int max_id = 0;
  for (const int id : semantic.labels.values()) max_id = std::max(max_id, id);
  semantic.num_classes = cfg.num_classes > 0 ? cfg.num_classes : max_id + 1;

  const int s = cfg.params.downsample;
  const auto pred_locations = eval::SampleLocations(pred, cfg.samples, cfg.seed, s);
  const auto gt_locations = eval::SampleLocations(gt, cfg.samples, CounterRng::Mix(cfg.seed + 1), s);
  const auto pred_hist = eval::SemanticHistogram(pred_locations, semantic, cfg.window);
  const auto gt_hist = eval::SemanticHistogram(gt_locations, semantic, cfg.window);
  eval::MetricsReport report;
  report.kl = eval::KlDivergence(gt_hist, pred_hist, cfg.epsilon);
  EmitReport(report, cfg);
  return kExitOk;
}

int Synth(const RunConfig& cfg) {
  const synth::SceneSpec spec = cfg.input.empty() ? synth::SceneSpec::Default()
                                                  : synth::ParseSceneSpec(ReadText(cfg.input));
  const synth::Scene scene = synth::GenerateScene(spec);
  const fs::path out_dir(cfg.output);
  EnsureDirectory(out_dir / "masks");
  io::WriteSequenceFile(scene.sequence, out_dir / "seq.jsonl");
  for (std::size_t i = 0; i < scene.masks.size(); ++i) {
    io::WriteMask(scene.masks[i],
                  out_dir / "masks" /
                      FrameFileName(spec.sequence_id, scene.sequence.frames[i].frame_index, "pgm"));
  }
  Logger()->info("synthesized {} frames, {} observations", scene.sequence.frames.size(),
                 scene.sequence.observations.size());
  return kExitOk;
}

int Render(const RunConfig& cfg) {
  const io::DecodedHeatmap map = io::ReadHeatmap(cfg.input);
  io::WriteHeatmap(map.values, cfg.output, io::HeatmapFormat::kPng8);
  return kExitOk;
}

int LossesCheck(const RunConfig& cfg) {
  const auto rows = losses::RunLossesCheck(cfg.trials, cfg.seed);
  bool ok = true;
  std::printf("%-30s %8s %18s  %s\n", "kernel", "trials", "max_rel_error", "status");
  for (const auto& row : rows) {
    std::printf("%-30s %8d %18.3e  %s\n", row.kernel.c_str(), row.trials, row.max_relative_error,
                row.passed ? "ok" : "FAIL");
    ok = ok && row.passed;
  }
  std::printf("tolerance %.0e, central differences with step %.0e\n", losses::kGradientTolerance,
              losses::kFiniteDifferenceStep);
  return ok ? kExitOk : kExitInternalError;
}

void AddPropagationFlags(CLI::App* app, RunConfig& cfg) {
  app->add_option("--sigma", cfg.params.sigma, "Gaussian std-dev in label-grid cells")
      ->capture_default_str();
  app->add_option("--downsample", cfg.params.downsample, "Image pixels per label-grid cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--support-radius", cfg.support_radius,
                  "Kernel truncation radius in cells (default 3*sigma)");
  app->add_option("--zmin", cfg.params.z_min, "Minimum depth in meters")->capture_default_str();
  app->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

bool IsInputError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidTransform:
    case ErrorCode::kMalformedRecord:
    case ErrorCode::kInvariantViolation:
    case ErrorCode::kDuplicateFrameIndex:
    case ErrorCode::kUnknownFrame:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kNonFiniteValue:
    case ErrorCode::kEmptyGroundTruth:
    case ErrorCode::kEmptyLocations:
    case ErrorCode::kInfeasibleSpec:
    case ErrorCode::kIoError:
      return true;
  }
  return false;
}

}  // namespace

int Run(int argc, char** argv) {
  CLI::App app{"Propagate pedestrian footprints across posed frames and evaluate walkability maps"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* propagate = app.add_subcommand("propagate", "Sequence -> per-frame footprint heatmaps");
  propagate->add_option("sequence", cfg.input, "Sequence file (JSON Lines)")->required()->check(CLI::ExistingFile);
  propagate->add_option("-o,--output", cfg.output, "Output directory")->required();
  propagate->add_option("--format", cfg.format, "Heatmap format")
      ->default_val("pgm")
      ->check(CLI::IsMember({"pgm", "png"}));
  AddPropagationFlags(propagate, cfg);

  CLI::App* directions = app.add_subcommand("directions", "Sequence -> per-frame walking-direction PFMs");
  directions->add_option("sequence", cfg.input, "Sequence file (JSON Lines)")->required()->check(CLI::ExistingFile);
  directions->add_option("-o,--output", cfg.output, "Output directory")->required();
  AddPropagationFlags(directions, cfg);

  auto add_report_flags = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output, "Report path (stdout if omitted)");
    sub->add_option("--format", cfg.format, "Report format")
        ->default_val("json")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* eval_expansion = app.add_subcommand("eval-expansion", "Expansion ratios of a prediction");
  eval_expansion->add_option("--pred", cfg.pred_path, "Predicted score map (PGM)")->required()->check(CLI::ExistingFile);
  eval_expansion->add_option("--gt", cfg.gt_path, "Ground-truth map (PGM, nonzero = positive)")->required()->check(CLI::ExistingFile);
  eval_expansion->add_option("--threshold", cfg.threshold, "Prediction threshold")->capture_default_str();
  add_report_flags(eval_expansion);

  CLI::App* eval_map = app.add_subcommand("eval-map", "Mean average precision over image pairs");
  eval_map->add_option("--scores", cfg.score_paths, "Score maps (PGM), repeatable")->required()->check(CLI::ExistingFile);
  eval_map->add_option("--gt", cfg.gt_paths, "Ground-truth maps (PGM), paired with --scores")->required()->check(CLI::ExistingFile);
  add_report_flags(eval_map);

  CLI::App* eval_kl = app.add_subcommand("eval-kl", "KL divergence of semantic feet-location histograms");
  eval_kl->add_option("--pred", cfg.pred_path, "Predicted score map (PGM)")->required()->check(CLI::ExistingFile);
  eval_kl->add_option("--gt", cfg.gt_path, "Ground-truth footprint map (PGM)")->required()->check(CLI::ExistingFile);
  eval_kl->add_option("--semantic", cfg.semantic_path, "Full-resolution class-id map (PGM)")->required()->check(CLI::ExistingFile);
  eval_kl->add_option("--classes", cfg.num_classes, "Number of classes (default max id + 1)");
  eval_kl->add_option("--samples", cfg.samples, "Locations sampled per map")->capture_default_str();
  eval_kl->add_option("--window", cfg.window, "Odd mode window in pixels")->capture_default_str();
  eval_kl->add_option("--epsilon", cfg.epsilon, "Histogram smoothing")->capture_default_str();
  eval_kl->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  eval_kl->add_option("--downsample", cfg.params.downsample, "Image pixels per label-grid cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_report_flags(eval_kl);

  CLI::App* synth_cmd = app.add_subcommand("synth", "SceneSpec JSON -> sequence + ground-truth masks");
  synth_cmd->add_option("spec", cfg.input, "SceneSpec JSON (default scene if omitted)")->check(CLI::ExistingFile);
  synth_cmd->add_option("-o,--output", cfg.output, "Output directory")->required();

  CLI::App* render = app.add_subcommand("render", "PGM heatmap -> 8-bit PNG");
  render->add_option("input", cfg.input, "Heatmap (PGM)")->required()->check(CLI::ExistingFile);
  render->add_option("-o,--output", cfg.output, "PNG path")->required();

  CLI::App* losses_check = app.add_subcommand("losses-check", "Finite-difference self-test of the loss kernels");
  losses_check->add_option("--trials", cfg.trials, "Random trials per kernel")->capture_default_str()->check(CLI::PositiveNumber);
  losses_check->add_option("--seed", cfg.seed, "Trial seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*propagate) return Propagate(cfg);
    if (*directions) return Directions(cfg);
    if (*eval_expansion) return EvalExpansion(cfg);
    if (*eval_map) return EvalMap(cfg);
    if (*eval_kl) return EvalKl(cfg);
    if (*synth_cmd) return Synth(cfg);
    if (*render) return Render(cfg);
    if (*losses_check) return LossesCheck(cfg);
  } catch (const Error& e) {
    Logger()->error("{}", e.what());
    return IsInputError(e.code()) ? kExitInputError : kExitInternalError;
  } catch (const std::exception& e) {
    Logger()->critical("internal error: {}", e.what());
    return kExitInternalError;
  }
  return kExitInputError;
}

int Run(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("footprint");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  return Run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace footprint::cli
