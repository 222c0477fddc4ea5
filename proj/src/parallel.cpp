// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "stereotrace/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <thread>

#include "stereotrace/errors.hpp"

namespace stereotrace {

namespace {

void render_row(const Scene& scene, const PinholeProjection& projection, const AccelHandle& accel,
                const TraceSettings& settings, int y, std::span<double> out, TraceCounters& counters) {
  for (int x = 0; x < projection.width(); ++x) {
    const Color c = trace(projection.ray(x, y), scene, accel, settings, settings.max_depth, &counters);
    out[3 * x] = c.r;
    out[3 * x + 1] = c.g;
    out[3 * x + 2] = c.b;
  }
}

std::optional<int> parse_positive(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 1) return std::nullopt;
  return value;
}

}  // namespace

std::string NetworkConfig::to_string() const {
  return std::to_string(blocks) + "x" + std::to_string(threads_per_block);
}

std::optional<NetworkConfig> parse_network_config(std::string_view text) {
  const std::size_t sep = text.find_first_of("x:");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto b = parse_positive(text.substr(0, sep));
  const auto t = parse_positive(text.substr(sep + 1));
  if (!b || !t) return std::nullopt;
  return NetworkConfig{*b, *t};
}

Assignment partition_image(int width, int height, const NetworkConfig& config) {
  Assignment a;
  a.width = width;
  a.height = height;
  a.config = config;
  a.workers.resize(static_cast<std::size_t>(config.total_workers()));

  const int base = height / config.blocks;
  const int extra = height % config.blocks;
  int row = 0;
  for (int b = 0; b < config.blocks; ++b) {
    const int band_height = base + (b < extra ? 1 : 0);
    const Tile band{row, row + band_height, 0};
    for (int t = 0; t < config.threads_per_block; ++t) {
      const int worker = b * config.threads_per_block + t;
      WorkerShare& share = a.workers[static_cast<std::size_t>(worker)];
      share.band = band;
      share.band.worker_id = worker;
      for (int y = band.row_start + t; y < band.row_end; y += config.threads_per_block) share.rows.push_back(y);
    }
    row += band_height;
  }
  return a;
}

int worker_threads_for(const NetworkConfig& config) {
  int threads = config.total_workers();
  if (const char* cap = std::getenv("STEREOTRACE_THREADS_CAP")) {
    if (const auto value = parse_positive(cap)) threads = std::min(threads, *value);
  }
  return std::max(1, threads);
}

Framebuffer render_framebuffer(const Scene& scene, const Camera& camera, const AccelHandle& accel,
                               const TraceSettings& settings, int width, int height, const NetworkConfig& config,
                               ComputeStats* stats) {
  if (accel.revision() != scene.revision()) throw AccelMismatch();
  validate_camera(camera);

  const auto start = std::chrono::steady_clock::now();
  Framebuffer fb(width, height);
  const PinholeProjection projection(camera, width, height);
  const Assignment assignment = partition_image(width, height, config);
  const int workers = config.total_workers();
  const int threads = worker_threads_for(config);

  std::vector<TraceCounters> per_worker(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));

  auto run_thread = [&](int thread_index) {
    try {
      for (int w = thread_index; w < workers; w += threads) {
        TraceCounters& counters = per_worker[static_cast<std::size_t>(w)];
        for (int y : assignment.workers[static_cast<std::size_t>(w)].rows)
          render_row(scene, projection, accel, settings, y, fb.row(y), counters);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(thread_index)] = std::current_exception();
    }
  };

  if (threads == 1) {
    run_thread(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(run_thread, i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  if (stats) {
    stats->wall_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
    stats->threads_used = threads;
    stats->rows_per_worker.clear();
    stats->counters = {};
    for (int w = 0; w < workers; ++w) {
      stats->rows_per_worker.push_back(static_cast<int>(assignment.workers[static_cast<std::size_t>(w)].rows.size()));
      stats->counters += per_worker[static_cast<std::size_t>(w)];
    }
  }
  return fb;
}

RenderResult render_parallel(const Scene& scene, const Camera& camera, const AccelHandle& accel,
                             const TraceSettings& settings, int width, int height, const NetworkConfig& config) {
  RenderResult result;
  const Framebuffer fb = render_framebuffer(scene, camera, accel, settings, width, height, config, &result.stats);
  result.image = quantize(fb);
  return result;
}

Framebuffer render_serial(const Scene& scene, const Camera& camera, const AccelHandle& accel,
                          const TraceSettings& settings, int width, int height) {
  if (accel.revision() != scene.revision()) throw AccelMismatch();
  Framebuffer fb(width, height);
  const PinholeProjection projection(camera, width, height);
  TraceCounters counters;
  for (int y = 0; y < height; ++y) render_row(scene, projection, accel, settings, y, fb.row(y), counters);
  return fb;
}

}  // namespace stereotrace
