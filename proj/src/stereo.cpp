// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "stereotrace/stereo.hpp"

#include <chrono>
#include <thread>

#include "stereotrace/errors.hpp"

namespace stereotrace {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ns_between(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
}

struct ChannelFrames {
  Framebuffer left;
  Framebuffer right;
  ComputeStats left_stats;
  ComputeStats right_stats;
};

ChannelFrames render_channels(const Scene& scene, const EyePair& eyes, const AccelHandle& accel,
                              const TraceSettings& settings, int width, int height, const NetworkConfig& config,
                              bool channel_parallel) {
  ChannelFrames frames;
  auto left = [&] {
    frames.left = render_framebuffer(scene, eyes.left, accel, settings, width, height, config, &frames.left_stats);
  };
  auto right = [&] {
    frames.right = render_framebuffer(scene, eyes.right, accel, settings, width, height, config, &frames.right_stats);
  };
  if (channel_parallel) {
    std::exception_ptr left_error;
    {
      std::jthread left_thread([&] {
        try {
          left();
        } catch (...) {
          left_error = std::current_exception();
        }
      });
      right();
    }
    if (left_error) std::rethrow_exception(left_error);
  } else {
    left();
    right();
  }
  return frames;
}

// Splits the measured compute stage between the channels. When they overlap
// in time their own durations add up to more than the stage took, so the
// stage wall time is divided in proportion to them.
void assign_compute(StageTimings& timings, std::int64_t stage_ns, const ChannelFrames& frames) {
  const double left = static_cast<double>(frames.left_stats.wall_ns);
  const double right = static_cast<double>(frames.right_stats.wall_ns);
  const double share = left + right > 0.0 ? left / (left + right) : 0.5;
  timings.compute_left = static_cast<std::int64_t>(static_cast<double>(stage_ns) * share);
  timings.compute_right = stage_ns - timings.compute_left;
}

Camera with_raster_aspect(Camera camera, int width, int height) {
  camera.aspect = static_cast<double>(width) / static_cast<double>(height);
  return camera;
}

// The buffers a device-side renderer owns: its own copy of the scene, the
// acceleration data and both eye cameras.
struct DeviceBuffers {
  Scene scene;
  AccelHandle accel;
  EyePair eyes;
};

}  // namespace

void validate_rig(const StereoRig& rig) {
  validate_camera(rig.base);
  const double distance = length(rig.base.look_at - rig.base.position);
  if (!(rig.eye_separation > 0.0) || !(rig.eye_separation < distance))
    throw ValidationError("stereo", "eye separation must be in (0, " + std::to_string(distance) + ")");
}

EyePair derive_eyes(const StereoRig& rig) {
  const Vec3 forward = normalize(rig.base.look_at - rig.base.position);
  const Vec3 right_axis = normalize(cross(forward, rig.base.up));
  const Vec3 offset = right_axis * (rig.eye_separation * 0.5);
  EyePair eyes{rig.base, rig.base};
  eyes.left.position = rig.base.position - offset;
  eyes.left.look_at = rig.base.look_at - offset;
  eyes.right.position = rig.base.position + offset;
  eyes.right.look_at = rig.base.look_at + offset;
  return eyes;
}

StageFractions stage_fractions(const StageTimings& t) {
  if (t.total <= 0) throw ZeroTotal();
  const double compute = static_cast<double>(t.compute_left + t.compute_right);
  const double transfer = static_cast<double>(t.transfer_in + t.transfer_out);
  const double other = static_cast<double>(t.prepare + t.postprocess + t.encode);
  const double sum = compute + transfer + other;
  if (!(sum > 0.0)) throw ZeroTotal();
  return {compute / sum, transfer / sum, other / sum};
}

Image compose_anaglyph(const Image& left, const Image& right, const simd::KernelTable& kernels) {
  if (left.width != right.width || left.height != right.height)
    throw DimensionMismatch("anaglyph inputs differ in size");
  Image out(left.width, left.height);
  kernels.anaglyph(left.pixels, right.pixels, out.pixels);
  return out;
}

Image compose_sbs(const Image& left, const Image& right, const simd::KernelTable& kernels) {
  if (left.width != right.width || left.height != right.height)
    throw DimensionMismatch("side-by-side inputs differ in size");
  if (left.width < 2) throw DimensionMismatch("side-by-side needs width >= 2");
  const int half = left.width / 2;
  Image out(2 * half, left.height);
  const std::size_t half_bytes = static_cast<std::size_t>(half) * 3;
  for (int y = 0; y < left.height; ++y) {
    const auto row = out.row(y);
    kernels.squeeze_row(left.row(y), row.first(half_bytes));
    kernels.squeeze_row(right.row(y), row.subspan(half_bytes));
  }
  return out;
}

StereoRender render_stereo(const Scene& scene, const StereoRig& rig, const AccelHandle& accel,
                           const TraceSettings& settings, int width, int height, const NetworkConfig& config,
                           bool channel_parallel) {
  validate_rig(rig);
  const EyePair eyes = derive_eyes(rig);

  const auto t0 = Clock::now();
  ChannelFrames frames = render_channels(scene, eyes, accel, settings, width, height, config, channel_parallel);
  const auto t1 = Clock::now();

  StereoRender out;
  out.left = quantize(frames.left);
  out.right = quantize(frames.right);
  const auto t2 = Clock::now();

  assign_compute(out.timings, ns_between(t0, t1), frames);
  out.timings.transfer_out = ns_between(t1, t2);
  out.timings.total = ns_between(t0, t2);
  out.left_stats = std::move(frames.left_stats);
  out.right_stats = std::move(frames.right_stats);
  return out;
}

std::string_view to_string(StereoMode mode) {
  switch (mode) {
    case StereoMode::Separate: return "separate";
    case StereoMode::Anaglyph: return "anaglyph";
    case StereoMode::Sbs: return "sbs";
  }
  return "unknown";
}

bool parse_stereo_mode(std::string_view text, StereoMode& out) {
  for (StereoMode m : {StereoMode::Separate, StereoMode::Anaglyph, StereoMode::Sbs}) {
    if (text == to_string(m)) {
      out = m;
      return true;
    }
  }
  return false;
}

std::vector<std::filesystem::path> output_paths(StereoMode mode, const std::filesystem::path& base) {
  if (mode != StereoMode::Separate) return {base};
  const std::filesystem::path dir = base.parent_path();
  const std::string stem = base.stem().string();
  const std::string ext = base.has_extension() ? base.extension().string() : ".ppm";
  return {dir / (stem + "_left" + ext), dir / (stem + "_right" + ext)};
}

StereoOutput run_pipeline(const PipelineJob& job) {
  StereoOutput out;
  out.mode = job.mode;
  const auto t_start = Clock::now();

  // prepare: parse/validate the job and build the acceleration structure.
  SceneDocument doc = std::holds_alternative<SceneDocument>(job.source)
                          ? std::get<SceneDocument>(job.source)
                          : load_scene_document(std::get<std::filesystem::path>(job.source));
  if (job.width < 1 || job.height < 1) throw ValidationError("job", "image size must be at least 1x1");
  if (job.mode == StereoMode::Sbs && job.width < 2) throw ValidationError("job", "side-by-side needs width >= 2");
  StereoRig rig{with_raster_aspect(doc.camera, job.width, job.height), job.eye_separation.value_or(doc.eye_separation)};
  validate_rig(rig);
  const EyePair eyes = derive_eyes(rig);
  const AccelHandle accel = build_accel(doc.scene, job.accel);
  out.triangle_count = doc.scene.triangle_count();
  out.object_count = doc.scene.objects().size();
  const auto t_prepared = Clock::now();

  // transfer_in: renderer-owned copies of every input buffer.
  const DeviceBuffers device{doc.scene, accel, eyes};
  const auto t_uploaded = Clock::now();

  ChannelFrames frames = render_channels(device.scene, device.eyes, device.accel, job.settings, job.width, job.height,
                                         job.config, job.channel_parallel);
  const auto t_computed = Clock::now();

  // transfer_out: quantize the channel framebuffers into host images.
  std::vector<Image> channels;
  channels.push_back(quantize(frames.left));
  channels.push_back(quantize(frames.right));
  const auto t_downloaded = Clock::now();

  switch (job.mode) {
    case StereoMode::Separate: out.images = std::move(channels); break;
    case StereoMode::Anaglyph: out.images.push_back(compose_anaglyph(channels[0], channels[1])); break;
    case StereoMode::Sbs: out.images.push_back(compose_sbs(channels[0], channels[1])); break;
  }
  const auto t_composed = Clock::now();

  for (const Image& image : out.images) out.encoded.push_back(encode_ppm(image));
  if (job.output) {
    const auto paths = output_paths(job.mode, *job.output);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      write_file(paths[i], out.encoded[i]);
      out.written.push_back(paths[i]);
    }
  }
  const auto t_end = Clock::now();

  out.timings.prepare = ns_between(t_start, t_prepared);
  out.timings.transfer_in = ns_between(t_prepared, t_uploaded);
  assign_compute(out.timings, ns_between(t_uploaded, t_computed), frames);
  out.timings.transfer_out = ns_between(t_computed, t_downloaded);
  out.timings.postprocess = ns_between(t_downloaded, t_composed);
  out.timings.encode = ns_between(t_composed, t_end);
  out.timings.total = ns_between(t_start, t_end);
  out.counters = frames.left_stats.counters;
  out.counters += frames.right_stats.counters;
  return out;
}

}  // namespace stereotrace
