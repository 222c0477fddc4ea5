// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stereotrace/stereo.hpp"

namespace stereotrace {

/// CSV header row of bench reports; one data row per pipeline run follows.
inline constexpr std::string_view kBenchCsvHeader =
    "scene_id,objects,triangles,width,height,blocks,threads,accel,rep,prepare_ns,transfer_in_ns,"
    "compute_left_ns,compute_right_ns,transfer_out_ns,postprocess_ns,encode_ns,total_ns,isect_tests";

struct BenchScene {
  std::string id;
  std::variant<int, std::filesystem::path> source;  // paper scene object count or scene file

  static BenchScene paper(int object_count);
  static BenchScene file(const std::filesystem::path& path);
};

struct Resolution {
  int width = 128;
  int height = 128;
};

struct BenchPlan {
  std::vector<BenchScene> scenes;
  std::vector<Resolution> resolutions{{128, 128}, {256, 256}};
  std::vector<NetworkConfig> configs{{1, 1}, {2, 1}, {4, 1}};
  std::vector<AccelMode> accels{AccelMode::Bvh};
  int repetitions = 5;
  StereoMode mode = StereoMode::Separate;
  TraceSettings settings;
  bool channel_parallel = true;
};

/// Throws ValidationError if the plan has no scenes, resolutions, configs or
/// accel modes, or fewer than one repetition.
void validate_plan(const BenchPlan& plan);

struct BenchRecord {
  std::string scene_id;
  std::size_t objects = 0;
  std::size_t triangles = 0;
  int width = 0;
  int height = 0;
  NetworkConfig config;
  AccelMode accel = AccelMode::Bvh;
  int rep = 0;
  StageTimings timings;
  std::uint64_t isect_tests = 0;
};

std::string to_csv_row(const BenchRecord& record);

/// Runs every (scene, resolution, config, accel, repetition) cell in that
/// nesting order, one at a time. `on_record` is invoked after each cell.
std::vector<BenchRecord> run_bench(const BenchPlan& plan,
                                   const std::function<void(const BenchRecord&)>& on_record = {});

/// Writes the header and each record as it completes, flushing per row.
std::vector<BenchRecord> run_bench_csv(const BenchPlan& plan, std::ostream& csv);

double median(std::vector<double> values);

/// Median compute-group time (compute_left + compute_right) in ns over the
/// records matching the given cell coordinates.
double median_compute_ns(const std::vector<BenchRecord>& records, std::string_view scene_id, int width, int height,
                         const NetworkConfig& config, AccelMode accel);

/// Human-readable summary: per-scene median stage fractions, speedup of each
/// config against 1x1, and compute time against triangle count.
std::string summarize(const BenchPlan& plan, const std::vector<BenchRecord>& records);

}  // namespace stereotrace
