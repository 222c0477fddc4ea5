// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stereotrace/accel.hpp"
#include "stereotrace/image.hpp"
#include "stereotrace/parallel.hpp"
#include "stereotrace/scene.hpp"

namespace stereotrace {

struct StereoRig {
  Camera base;
  double eye_separation = kDefaultEyeSeparation;
};

/// Throws ValidationError unless 0 < eye_separation < |look_at - position|.
void validate_rig(const StereoRig& rig);

struct EyePair {
  Camera left;
  Camera right;
};

/// Parallel-axis rig: each eye is the base camera translated by
/// -/+ eye_separation / 2 along normalize(forward x up). look_at moves with
/// the position so both eyes keep the base view direction.
EyePair derive_eyes(const StereoRig& rig);

/// Per-stage wall time in nanoseconds. Stages are measured back to back, so
/// their sum never exceeds `total`.
struct StageTimings {
  std::int64_t prepare = 0;
  std::int64_t transfer_in = 0;
  std::int64_t compute_left = 0;
  std::int64_t compute_right = 0;
  std::int64_t transfer_out = 0;
  std::int64_t postprocess = 0;
  std::int64_t encode = 0;
  std::int64_t total = 0;

  std::int64_t stage_sum() const {
    return prepare + transfer_in + compute_left + compute_right + transfer_out + postprocess + encode;
  }
};

struct StageFractions {
  double compute = 0.0;   // compute_left + compute_right
  double transfer = 0.0;  // transfer_in + transfer_out
  double other = 0.0;     // prepare + postprocess + encode
};

/// Group shares of the stage sum; they add up to 1. Throws ZeroTotal when
/// total or the stage sum is zero.
StageFractions stage_fractions(const StageTimings& timings);

/// Red from the left eye, green and blue from the right.
Image compose_anaglyph(const Image& left, const Image& right,
                       const simd::KernelTable& kernels = simd::active_kernels());

/// Side-by-side: both channels squeezed to floor(w/2) columns by averaging
/// column pairs (rounding half up), left half then right half.
Image compose_sbs(const Image& left, const Image& right, const simd::KernelTable& kernels = simd::active_kernels());

struct StereoRender {
  Image left;
  Image right;
  StageTimings timings;  // compute_left, compute_right, transfer_out and total are set
  ComputeStats left_stats;
  ComputeStats right_stats;
};

/// Renders both eyes, each with its own worker grid. With channel_parallel
/// the two channels run concurrently. Images are identical either way.
StereoRender render_stereo(const Scene& scene, const StereoRig& rig, const AccelHandle& accel,
                           const TraceSettings& settings, int width, int height, const NetworkConfig& config,
                           bool channel_parallel);

enum class StereoMode { Separate, Anaglyph, Sbs };

std::string_view to_string(StereoMode mode);
bool parse_stereo_mode(std::string_view text, StereoMode& out);

struct StereoOutput {
  StereoMode mode = StereoMode::Separate;
  std::vector<Image> images;          // 2 for separate, else 1
  std::vector<std::string> encoded;   // PPM bytes per image
  std::vector<std::filesystem::path> written;
  StageTimings timings;
  TraceCounters counters;             // both channels
  std::size_t triangle_count = 0;
  std::size_t object_count = 0;
};

struct PipelineJob {
  std::variant<std::filesystem::path, SceneDocument> source;
  int width = 64;
  int height = 64;
  NetworkConfig config;
  TraceSettings settings;
  StereoMode mode = StereoMode::Separate;
  AccelMode accel = AccelMode::Bvh;
  bool channel_parallel = true;
  std::optional<double> eye_separation;  // overrides the scene document
  /// Output file. In separate mode "_left" / "_right" is appended to the stem.
  std::optional<std::filesystem::path> output;
};

/// Output paths written for a job's mode and base path.
std::vector<std::filesystem::path> output_paths(StereoMode mode, const std::filesystem::path& base);

/// prepare -> transfer_in -> compute (both channels) -> transfer_out ->
/// postprocess -> encode, with each stage's wall time recorded.
StereoOutput run_pipeline(const PipelineJob& job);

}  // namespace stereotrace
