// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0
//
// stereotrace: render, stereo, bench and scene gen front end.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stereotrace/bench.hpp"
#include "stereotrace/errors.hpp"
#include "stereotrace/stereo.hpp"

namespace st = stereotrace;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Bad flag values found after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SharedFlags {
  std::string scene;
  int paper_scene = 0;
  std::string size = "64x64";
  std::string config = "1x1";
  std::string accel = "bvh";
  int depth = st::TraceSettings{}.max_depth;
  std::string output;
};

void add_source_flags(CLI::App& cmd, SharedFlags& f) {
  auto* scene = cmd.add_option("--scene", f.scene, "Scene file");
  auto* paper = cmd.add_option("--paper-scene", f.paper_scene, "Built-in experiment scene: 1, 2, 3, 5 or 6");
  scene->excludes(paper);
}

void add_render_flags(CLI::App& cmd, SharedFlags& f) {
  add_source_flags(cmd, f);
  cmd.add_option("--size", f.size, "Image size WxH")->capture_default_str();
  cmd.add_option("--config", f.config, "Worker grid BxT (bands x workers per band)")->capture_default_str();
  cmd.add_option("--accel", f.accel, "linear or bvh")->capture_default_str();
  cmd.add_option("--depth", f.depth, "Maximum reflection depth")->capture_default_str();
  cmd.add_option("-o,--output", f.output, "Output PPM path");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) items.push_back(item);
  return items;
}

st::Resolution parse_size(const std::string& text) {
  // WxH reuses the BxT grammar: two positive integers around an 'x'.
  const auto parsed = st::parse_network_config(text);
  if (!parsed || text.find(':') != std::string::npos) throw UsageError("invalid size '" + text + "', expected WxH");
  return {parsed->blocks, parsed->threads_per_block};
}

st::NetworkConfig parse_config(const std::string& text) {
  const auto parsed = st::parse_network_config(text);
  if (!parsed) throw UsageError("invalid network config '" + text + "', expected BxT");
  return *parsed;
}

st::AccelMode parse_accel(const std::string& text) {
  st::AccelMode mode{};
  if (!st::parse_accel_mode(text, mode)) throw UsageError("invalid accel '" + text + "', expected linear or bvh");
  return mode;
}

void check_paper_scene(int count) {
  if (!st::is_paper_scene_count(count))
    throw UsageError("unsupported paper scene " + std::to_string(count) + " (expected 1, 2, 3, 5 or 6)");
}

st::TraceSettings parse_settings(const SharedFlags& f) {
  if (f.depth < 0) throw UsageError("--depth must be >= 0");
  st::TraceSettings settings;
  settings.max_depth = f.depth;
  return settings;
}

// Scene source of the shared flags. Paper scenes use the default camera.
std::variant<std::filesystem::path, st::SceneDocument> scene_source(const SharedFlags& f) {
  if (!f.scene.empty()) return std::filesystem::path(f.scene);
  if (f.paper_scene == 0) throw UsageError("one of --scene or --paper-scene is required");
  check_paper_scene(f.paper_scene);
  st::SceneDocument doc;
  doc.scene = st::paper_scene(f.paper_scene);
  return doc;
}

double ms(std::int64_t ns) { return static_cast<double>(ns) / 1e6; }

void print_timings(const st::StageTimings& t) {
  std::printf("prepare       %10.3f ms\n", ms(t.prepare));
  std::printf("transfer_in   %10.3f ms\n", ms(t.transfer_in));
  std::printf("compute_left  %10.3f ms\n", ms(t.compute_left));
  std::printf("compute_right %10.3f ms\n", ms(t.compute_right));
  std::printf("transfer_out  %10.3f ms\n", ms(t.transfer_out));
  std::printf("postprocess   %10.3f ms\n", ms(t.postprocess));
  std::printf("encode        %10.3f ms\n", ms(t.encode));
  std::printf("total         %10.3f ms\n", ms(t.total));
}

int run_render(const SharedFlags& f) {
  using Clock = std::chrono::steady_clock;
  const auto ns = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
  };
  const st::Resolution size = parse_size(f.size);
  const st::NetworkConfig config = parse_config(f.config);
  const st::AccelMode accel_mode = parse_accel(f.accel);
  const st::TraceSettings settings = parse_settings(f);
  const auto source = scene_source(f);

  const auto t0 = Clock::now();
  const st::SceneDocument doc = std::holds_alternative<st::SceneDocument>(source)
                                    ? std::get<st::SceneDocument>(source)
                                    : st::load_scene_document(std::get<std::filesystem::path>(source));
  st::Camera camera = doc.camera;
  camera.aspect = static_cast<double>(size.width) / static_cast<double>(size.height);
  st::validate_camera(camera);
  const st::AccelHandle accel = st::build_accel(doc.scene, accel_mode);
  const auto t1 = Clock::now();
  st::ComputeStats stats;
  const st::Framebuffer fb =
      st::render_framebuffer(doc.scene, camera, accel, settings, size.width, size.height, config, &stats);
  const auto t2 = Clock::now();
  const st::Image image = st::quantize(fb);
  const auto t3 = Clock::now();
  const std::string bytes = st::encode_ppm(image);
  if (!f.output.empty()) st::write_file(f.output, bytes);
  const auto t4 = Clock::now();

  st::StageTimings t;
  t.prepare = ns(t0, t1);
  t.compute_left = ns(t1, t2);
  t.transfer_out = ns(t2, t3);
  t.encode = ns(t3, t4);
  t.total = ns(t0, t4);
  std::printf("render %dx%d config %s accel %s: %zu triangles, %llu intersection tests\n", size.width, size.height,
              config.to_string().c_str(), std::string(st::to_string(accel_mode)).c_str(),
              doc.scene.triangle_count(), static_cast<unsigned long long>(stats.counters.triangle_tests()));
  print_timings(t);
  if (!f.output.empty()) std::printf("wrote %s\n", f.output.c_str());
  return 0;
}

struct StereoFlags {
  std::string mode = "separate";
  std::optional<double> eye_sep;
  std::string channel_parallel = "on";
};

bool parse_on_off(const std::string& text, const char* flag) {
  if (text == "on") return true;
  if (text == "off") return false;
  throw UsageError(std::string(flag) + " expects on or off, got '" + text + "'");
}

int run_stereo(const SharedFlags& f, const StereoFlags& s) {
  st::PipelineJob job;
  const st::Resolution size = parse_size(f.size);
  job.width = size.width;
  job.height = size.height;
  job.config = parse_config(f.config);
  job.accel = parse_accel(f.accel);
  job.settings = parse_settings(f);
  if (!st::parse_stereo_mode(s.mode, job.mode))
    throw UsageError("invalid mode '" + s.mode + "', expected separate, anaglyph or sbs");
  job.channel_parallel = parse_on_off(s.channel_parallel, "--channel-parallel");
  job.eye_separation = s.eye_sep;
  job.source = scene_source(f);
  if (!f.output.empty()) job.output = std::filesystem::path(f.output);

  const st::StereoOutput out = st::run_pipeline(job);
  std::printf("stereo %dx%d mode %s config %s accel %s: %zu objects, %zu triangles, %llu intersection tests\n",
              job.width, job.height, std::string(st::to_string(job.mode)).c_str(), job.config.to_string().c_str(),
              std::string(st::to_string(job.accel)).c_str(), out.object_count, out.triangle_count,
              static_cast<unsigned long long>(out.counters.triangle_tests()));
  print_timings(out.timings);
  for (const auto& path : out.written) std::printf("wrote %s\n", path.string().c_str());
  return 0;
}

struct BenchFlags {
  std::vector<std::string> scenes;
  std::string paper_scenes;
  std::string sizes = "128x128,256x256";
  std::string configs = "1x1,2x1,4x1";
  std::string accels = "bvh";
  int reps = 5;
  std::string mode = "separate";
  std::string channel_parallel = "on";
  int depth = st::TraceSettings{}.max_depth;
  std::string out_csv;
  bool no_summary = false;
};

int run_bench(const BenchFlags& b) {
  st::BenchPlan plan;
  plan.scenes.clear();
  std::vector<std::string> paper = split_list(b.paper_scenes);
  if (paper.empty() && b.scenes.empty()) paper = {"1", "2", "3", "5", "6"};
  for (const std::string& item : paper) {
    int count = 0;
    try {
      std::size_t used = 0;
      count = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw UsageError("invalid paper scene '" + item + "'");
    }
    check_paper_scene(count);
    plan.scenes.push_back(st::BenchScene::paper(count));
  }
  for (const std::string& path : b.scenes) plan.scenes.push_back(st::BenchScene::file(path));

  plan.resolutions.clear();
  for (const std::string& item : split_list(b.sizes)) plan.resolutions.push_back(parse_size(item));
  plan.configs.clear();
  for (const std::string& item : split_list(b.configs)) plan.configs.push_back(parse_config(item));
  plan.accels.clear();
  for (const std::string& item : split_list(b.accels)) plan.accels.push_back(parse_accel(item));
  if (b.reps < 1) throw UsageError("--reps must be >= 1");
  plan.repetitions = b.reps;
  if (!st::parse_stereo_mode(b.mode, plan.mode))
    throw UsageError("invalid mode '" + b.mode + "', expected separate, anaglyph or sbs");
  plan.channel_parallel = parse_on_off(b.channel_parallel, "--channel-parallel");
  if (b.depth < 0) throw UsageError("--depth must be >= 0");
  plan.settings.max_depth = b.depth;
  try {
    st::validate_plan(plan);
  } catch (const st::ValidationError& e) {
    throw UsageError(e.what());
  }

  std::vector<st::BenchRecord> records;
  if (b.out_csv.empty()) {
    records = st::run_bench_csv(plan, std::cout);
  } else {
    std::ofstream csv(b.out_csv, std::ios::binary);
    if (!csv) throw st::WriteError(b.out_csv);
    records = st::run_bench_csv(plan, csv);
    if (!csv) throw st::WriteError(b.out_csv);
  }
  if (!b.no_summary) (b.out_csv.empty() ? std::cerr : std::cout) << st::summarize(plan, records);
  return 0;
}

struct SceneGenFlags {
  int paper_scene = 0;
  std::string builtin;
  double scale = 3.0;
  std::string output;
};

int run_scene_gen(const SceneGenFlags& g) {
  st::SceneDocument doc;
  if (g.paper_scene != 0) {
    check_paper_scene(g.paper_scene);
    doc.scene = st::paper_scene(g.paper_scene);
  } else if (!g.builtin.empty()) {
    st::BuiltinKind kind{};
    if (!st::parse_builtin_kind(g.builtin, kind))
      throw UsageError("invalid builtin '" + g.builtin + "', expected cube, icosahedron or dodeca36");
    if (!(g.scale > 0.0)) throw UsageError("--scale must be > 0");
    const st::Scene reference = st::paper_scene(1);
    doc.scene = st::Scene({st::builtin_object(kind, {0, 0, 0}, g.scale, st::Material{})}, reference.lights(),
                          reference.ambient(), reference.background());
  } else {
    throw UsageError("one of --paper-scene or --builtin is required");
  }
  const std::string comment = "objects=" + std::to_string(doc.scene.objects().size()) +
                              " triangles=" + std::to_string(doc.scene.triangle_count());
  if (g.output.empty()) {
    std::cout << st::serialize_scene(doc, comment);
  } else {
    st::save_scene(g.output, doc, comment);
    std::printf("wrote %s (%s)\n", g.output.c_str(), comment.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel stereo ray tracer and benchmark harness"};
  app.require_subcommand(1);

  SharedFlags render_flags;
  auto* render = app.add_subcommand("render", "Render one mono image from the scene camera");
  add_render_flags(*render, render_flags);

  SharedFlags stereo_flags;
  StereoFlags stereo_extra;
  auto* stereo = app.add_subcommand("stereo", "Render a stereo pair");
  add_render_flags(*stereo, stereo_flags);
  stereo->add_option("--mode", stereo_extra.mode, "separate, anaglyph or sbs")->capture_default_str();
  stereo->add_option("--eye-sep", stereo_extra.eye_sep, "Eye separation (scene units)");
  stereo->add_option("--channel-parallel", stereo_extra.channel_parallel, "Render channels concurrently: on or off")
      ->capture_default_str();

  BenchFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "Sweep scenes, sizes and worker grids; write CSV timings");
  bench->add_option("--scene", bench_flags.scenes, "Scene file (repeatable)");
  bench->add_option("--paper-scenes", bench_flags.paper_scenes, "Comma list of built-in experiment scenes (default 1,2,3,5,6)");
  bench->add_option("--sizes,--size", bench_flags.sizes, "Comma list of WxH")->capture_default_str();
  bench->add_option("--configs,--config", bench_flags.configs, "Comma list of BxT")->capture_default_str();
  bench->add_option("--accel", bench_flags.accels, "Comma list of linear, bvh")->capture_default_str();
  bench->add_option("--reps", bench_flags.reps, "Repetitions per cell")->capture_default_str();
  bench->add_option("--mode", bench_flags.mode, "separate, anaglyph or sbs")->capture_default_str();
  bench->add_option("--channel-parallel", bench_flags.channel_parallel, "on or off")->capture_default_str();
  bench->add_option("--depth", bench_flags.depth, "Maximum reflection depth")->capture_default_str();
  bench->add_option("--out-csv", bench_flags.out_csv, "CSV output path (default stdout)");
  bench->add_flag("--no-summary", bench_flags.no_summary, "Skip the summary block");

  SceneGenFlags gen_flags;
  auto* scene = app.add_subcommand("scene", "Scene file utilities");
  scene->require_subcommand(1);
  auto* gen = scene->add_subcommand("gen", "Write a scene file");
  auto* gen_paper = gen->add_option("--paper-scene", gen_flags.paper_scene, "Built-in experiment scene: 1, 2, 3, 5 or 6");
  auto* gen_builtin = gen->add_option("--builtin", gen_flags.builtin, "cube, icosahedron or dodeca36");
  gen_paper->excludes(gen_builtin);
  gen->add_option("--scale", gen_flags.scale, "Builtin object scale")->capture_default_str();
  gen->add_option("-o,--output", gen_flags.output, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*render) return run_render(render_flags);
    if (*stereo) return run_stereo(stereo_flags, stereo_extra);
    if (*bench) return run_bench(bench_flags);
    if (*gen) return run_scene_gen(gen_flags);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const st::ParseError& e) {
    // Parse errors carry only a line number; name the file they came from.
    const std::string& path = *stereo ? stereo_flags.scene : render_flags.scene;
    std::fprintf(stderr, "error: %s: %s\n", path.c_str(), e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
