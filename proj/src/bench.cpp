// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "stereotrace/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

#include "stereotrace/errors.hpp"

namespace stereotrace {

namespace {

std::string format(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, a);
  return buf;
}

bool matches(const BenchRecord& r, std::string_view scene_id, int width, int height, const NetworkConfig& config,
             AccelMode accel) {
  return r.scene_id == scene_id && r.width == width && r.height == height && r.config == config && r.accel == accel;
}

}  // namespace

BenchScene BenchScene::paper(int object_count) {
  if (!is_paper_scene_count(object_count)) throw UnsupportedCount(object_count);
  return {"paper" + std::to_string(object_count), object_count};
}

BenchScene BenchScene::file(const std::filesystem::path& path) { return {path.stem().string(), path}; }

void validate_plan(const BenchPlan& plan) {
  if (plan.scenes.empty()) throw ValidationError("bench plan", "no scenes");
  if (plan.resolutions.empty()) throw ValidationError("bench plan", "no resolutions");
  if (plan.configs.empty()) throw ValidationError("bench plan", "no network configs");
  if (plan.accels.empty()) throw ValidationError("bench plan", "no accel modes");
  if (plan.repetitions < 1) throw ValidationError("bench plan", "repetitions must be >= 1");
  for (const Resolution& r : plan.resolutions)
    if (r.width < 1 || r.height < 1) throw ValidationError("bench plan", "resolution must be at least 1x1");
}

std::string to_csv_row(const BenchRecord& r) {
  const StageTimings& t = r.timings;
  std::string row;
  row += r.scene_id;
  for (const auto v : {static_cast<std::int64_t>(r.objects), static_cast<std::int64_t>(r.triangles),
                       static_cast<std::int64_t>(r.width), static_cast<std::int64_t>(r.height),
                       static_cast<std::int64_t>(r.config.blocks),
                       static_cast<std::int64_t>(r.config.threads_per_block)}) {
    row += ',';
    row += std::to_string(v);
  }
  row += ',';
  row += to_string(r.accel);
  for (const auto v : {static_cast<std::int64_t>(r.rep), t.prepare, t.transfer_in, t.compute_left, t.compute_right,
                       t.transfer_out, t.postprocess, t.encode, t.total}) {
    row += ',';
    row += std::to_string(v);
  }
  row += ',';
  row += std::to_string(r.isect_tests);
  return row;
}

std::vector<BenchRecord> run_bench(const BenchPlan& plan, const std::function<void(const BenchRecord&)>& on_record) {
  validate_plan(plan);
  std::vector<BenchRecord> records;

  for (const BenchScene& bench_scene : plan.scenes) {
    // Loaded once per scene; each cell still re-validates and rebuilds its
    // acceleration structure inside the pipeline's prepare stage.
    SceneDocument doc;
    if (std::holds_alternative<int>(bench_scene.source)) {
      doc.scene = paper_scene(std::get<int>(bench_scene.source));
    } else {
      doc = load_scene_document(std::get<std::filesystem::path>(bench_scene.source));
    }

    for (const Resolution& res : plan.resolutions)
      for (const NetworkConfig& config : plan.configs)
        for (AccelMode accel : plan.accels)
          for (int rep = 0; rep < plan.repetitions; ++rep) {
            PipelineJob job;
            job.source = doc;
            job.width = res.width;
            job.height = res.height;
            job.config = config;
            job.settings = plan.settings;
            job.mode = plan.mode;
            job.accel = accel;
            job.channel_parallel = plan.channel_parallel;
            const StereoOutput out = run_pipeline(job);

            BenchRecord record;
            record.scene_id = bench_scene.id;
            record.objects = out.object_count;
            record.triangles = out.triangle_count;
            record.width = res.width;
            record.height = res.height;
            record.config = config;
            record.accel = accel;
            record.rep = rep;
            record.timings = out.timings;
            record.isect_tests = out.counters.triangle_tests();
            records.push_back(record);
            if (on_record) on_record(record);
          }
  }
  return records;
}

std::vector<BenchRecord> run_bench_csv(const BenchPlan& plan, std::ostream& csv) {
  csv << kBenchCsvHeader << '\n' << std::flush;
  return run_bench(plan, [&](const BenchRecord& r) { csv << to_csv_row(r) << '\n' << std::flush; });
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double median_compute_ns(const std::vector<BenchRecord>& records, std::string_view scene_id, int width, int height,
                         const NetworkConfig& config, AccelMode accel) {
  std::vector<double> values;
  for (const BenchRecord& r : records)
    if (matches(r, scene_id, width, height, config, accel))
      values.push_back(static_cast<double>(r.timings.compute_left + r.timings.compute_right));
  return median(values);
}

std::string summarize(const BenchPlan& plan, const std::vector<BenchRecord>& records) {
  std::string out;
  out += "# reference figures, accelerator build: ~60% of time in compute, up to 40% in host<->device transfer and management;\n";
  out += "# reference figures, accelerator build: grid (4:1) cut compute time 20-25% vs (2:1) and 2.5x vs (1:1).\n";
  out += "# These figures are hardware-specific and are not asserted here.\n";

  const NetworkConfig baseline{1, 1};
  for (const BenchScene& scene : plan.scenes) {
    std::size_t objects = 0, triangles = 0;
    std::vector<double> fc, ft, fo;
    for (const BenchRecord& r : records) {
      if (r.scene_id != scene.id) continue;
      objects = r.objects;
      triangles = r.triangles;
      if (r.timings.total > 0) {
        const StageFractions f = stage_fractions(r.timings);
        fc.push_back(f.compute);
        ft.push_back(f.transfer);
        fo.push_back(f.other);
      }
    }
    out += "scene " + scene.id + " (objects=" + std::to_string(objects) + " triangles=" + std::to_string(triangles) +
           ")\n";
    out += "  median stage fractions: compute " + format("%.3f", median(fc)) + " transfer " +
           format("%.3f", median(ft)) + " other " + format("%.3f", median(fo)) + "\n";
    for (const Resolution& res : plan.resolutions)
      for (AccelMode accel : plan.accels) {
        const double base =
            median_compute_ns(records, scene.id, res.width, res.height, baseline, accel);
        out += "  " + std::to_string(res.width) + "x" + std::to_string(res.height) + " " +
               std::string(to_string(accel)) + ":";
        for (const NetworkConfig& config : plan.configs) {
          const double t = median_compute_ns(records, scene.id, res.width, res.height, config, accel);
          out += " " + config.to_string() + " " + format("%.3f", t / 1e6) + " ms";
          if (base > 0.0 && t > 0.0) out += " (x" + format("%.2f", base / t) + ")";
          out += ";";
        }
        out += "\n";
      }
  }

  // Compute time against scene complexity per (resolution, config, accel).
  if (plan.scenes.size() >= 2) {
    for (const Resolution& res : plan.resolutions)
      for (const NetworkConfig& config : plan.configs)
        for (AccelMode accel : plan.accels) {
          std::vector<std::pair<double, double>> points;
          for (const BenchScene& scene : plan.scenes) {
            double tri = 0.0;
            for (const BenchRecord& r : records)
              if (r.scene_id == scene.id) tri = static_cast<double>(r.triangles);
            points.emplace_back(tri, median_compute_ns(records, scene.id, res.width, res.height, config, accel));
          }
          double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
          const double n = static_cast<double>(points.size());
          for (auto [x, y] : points) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            syy += y * y;
          }
          const double cov = sxy - sx * sy / n;
          const double vx = sxx - sx * sx / n;
          const double vy = syy - sy * sy / n;
          const double r2 = (vx > 0 && vy > 0) ? cov * cov / (vx * vy) : 0.0;
          out += "complexity " + std::to_string(res.width) + "x" + std::to_string(res.height) + " " +
                 config.to_string() + " " + std::string(to_string(accel)) + ":";
          for (auto [x, y] : points) out += " " + format("%.0f", x) + "tri=" + format("%.3f", y / 1e6) + "ms";
          out += "; linear fit R^2 " + format("%.3f", r2) + "\n";
        }
  }
  return out;
}

}  // namespace stereotrace
