// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereotrace/accel.hpp"
#include "stereotrace/image.hpp"
#include "stereotrace/scene.hpp"
#include "stereotrace/tracer.hpp"

namespace stereotrace {

/// Worker grid shape (B:T): `blocks` horizontal image bands, each shared by
/// `threads_per_block` workers.
struct NetworkConfig {
  int blocks = 1;
  int threads_per_block = 1;

  int total_workers() const { return blocks * threads_per_block; }
  std::string to_string() const;  // "BxT"

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Parses "BxT" (also accepts "B:T"). Returns nullopt on malformed input or
/// non-positive factors.
std::optional<NetworkConfig> parse_network_config(std::string_view text);

/// Half-open scanline band [row_start, row_end).
struct Tile {
  int row_start = 0;
  int row_end = 0;
  int worker_id = 0;
};

struct WorkerShare {
  Tile band;              // the block's band; empty band means no rows
  std::vector<int> rows;  // rows of the band dealt to this worker
};

/// One share per worker, indexed by worker id = block * threads_per_block + thread.
struct Assignment {
  int width = 0;
  int height = 0;
  NetworkConfig config;
  std::vector<WorkerShare> workers;
};

/// Bands of near-equal height (the first height % blocks bands are one row
/// taller); inside a band rows go round-robin to the block's workers.
Assignment partition_image(int width, int height, const NetworkConfig& config);

struct ComputeStats {
  std::int64_t wall_ns = 0;
  int threads_used = 0;
  std::vector<int> rows_per_worker;
  TraceCounters counters;
};

/// OS threads used for a grid: total_workers, reduced by the optional
/// STEREOTRACE_THREADS_CAP environment variable. Output never depends on it.
int worker_threads_for(const NetworkConfig& config);

/// Renders linear radiance with the worker grid. Every worker writes only its
/// own rows; the call returns after all workers joined. The result is
/// bit-identical for every config.
Framebuffer render_framebuffer(const Scene& scene, const Camera& camera, const AccelHandle& accel,
                               const TraceSettings& settings, int width, int height, const NetworkConfig& config,
                               ComputeStats* stats = nullptr);

struct RenderResult {
  Image image;
  ComputeStats stats;
};

/// render_framebuffer followed by 8-bit quantization.
RenderResult render_parallel(const Scene& scene, const Camera& camera, const AccelHandle& accel,
                             const TraceSettings& settings, int width, int height, const NetworkConfig& config);

/// Single-threaded row-by-row reference render.
Framebuffer render_serial(const Scene& scene, const Camera& camera, const AccelHandle& accel,
                          const TraceSettings& settings, int width, int height);

}  // namespace stereotrace
