// Copyright 2026 The StereoTrace Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdlib>
#include <set>

#include "doctest.h"
#include "stereotrace/errors.hpp"
#include "stereotrace/parallel.hpp"
#include "support.hpp"

using namespace stereotrace;

namespace {

const std::vector<NetworkConfig> kConfigs{{1, 1}, {2, 1}, {4, 1}, {2, 2}, {4, 4}};

Camera raster_camera(int w, int h) {
  Camera cam = default_camera();
  cam.aspect = static_cast<double>(w) / h;
  return cam;
}

}  // namespace

TEST_CASE("network config parsing") {
  CHECK(parse_network_config("4x1") == NetworkConfig{4, 1});
  CHECK(parse_network_config("2:8") == NetworkConfig{2, 8});
  CHECK_FALSE(parse_network_config("0x1"));
  CHECK_FALSE(parse_network_config("2x"));
  CHECK_FALSE(parse_network_config("x2"));
  CHECK_FALSE(parse_network_config("2x2x2"));
  CHECK_FALSE(parse_network_config("-1x2"));
  CHECK_FALSE(parse_network_config("22"));
  CHECK(NetworkConfig{3, 5}.to_string() == "3x5");
  CHECK(NetworkConfig{3, 5}.total_workers() == 15);
}

TEST_CASE("partition examples") {
  SUBCASE("8 rows over (2:1)") {
    const Assignment a = partition_image(4, 8, {2, 1});
    REQUIRE(a.workers.size() == 2);
    CHECK(a.workers[0].rows == std::vector<int>{0, 1, 2, 3});
    CHECK(a.workers[1].rows == std::vector<int>{4, 5, 6, 7});
  }
  SUBCASE("8 rows over (2:2)") {
    const Assignment a = partition_image(4, 8, {2, 2});
    REQUIRE(a.workers.size() == 4);
    CHECK(a.workers[0].rows == std::vector<int>{0, 2});
    CHECK(a.workers[1].rows == std::vector<int>{1, 3});
    CHECK(a.workers[2].rows == std::vector<int>{4, 6});
    CHECK(a.workers[3].rows == std::vector<int>{5, 7});
    CHECK(a.workers[2].band.row_start == 4);
    CHECK(a.workers[2].band.row_end == 8);
  }
  SUBCASE("7 rows over (4:1)") {
    const Assignment a = partition_image(4, 7, {4, 1});
    std::vector<int> heights;
    for (const auto& w : a.workers) heights.push_back(w.band.row_end - w.band.row_start);
    CHECK(heights == std::vector<int>{2, 2, 2, 1});
  }
}

TEST_CASE("partition is an exact cover with near-equal bands") {
  for (int h = 1; h <= 32; ++h)
    for (int b = 1; b <= 8; ++b)
      for (int t = 1; t <= 8; ++t) {
        const Assignment a = partition_image(5, h, {b, t});
        REQUIRE(a.workers.size() == static_cast<std::size_t>(b * t));
        std::vector<int> owner(static_cast<std::size_t>(h), -1);
        int min_band = h, max_band = 0;
        for (std::size_t w = 0; w < a.workers.size(); ++w) {
          const auto& share = a.workers[w];
          CHECK(share.band.worker_id == static_cast<int>(w));
          const int band_h = share.band.row_end - share.band.row_start;
          min_band = std::min(min_band, band_h);
          max_band = std::max(max_band, band_h);
          for (int y : share.rows) {
            REQUIRE(y >= 0);
            REQUIRE(y < h);
            CHECK(y >= share.band.row_start);
            CHECK(y < share.band.row_end);
            CHECK(owner[static_cast<std::size_t>(y)] == -1);
            owner[static_cast<std::size_t>(y)] = static_cast<int>(w);
          }
        }
        for (int o : owner) CHECK(o != -1);
        CHECK(max_band - min_band <= 1);
      }
}

TEST_CASE("per-worker row counts differ by at most the block count") {
  for (int h = 1; h <= 64; ++h)
    for (int b = 1; b <= 8; ++b)
      for (int t = 1; t <= 8; ++t) {
        const Assignment a = partition_image(3, h, {b, t});
        std::size_t lo = a.workers.front().rows.size(), hi = lo;
        for (const auto& w : a.workers) {
          lo = std::min(lo, w.rows.size());
          hi = std::max(hi, w.rows.size());
        }
        CHECK(hi - lo <= static_cast<std::size_t>(b));
      }
}

TEST_CASE("renders are identical for every config and match the serial reference") {
  const TraceSettings settings;
  for (int n : kPaperSceneCounts) {
    CAPTURE(n);
    const Scene s = paper_scene(n);
    const AccelHandle accel = build_bvh(s);
    const Camera cam = raster_camera(64, 64);
    const Image serial = quantize(render_serial(s, cam, accel, settings, 64, 64));
    for (const NetworkConfig& c : kConfigs) {
      CAPTURE(c.to_string());
      const RenderResult r = render_parallel(s, cam, accel, settings, 64, 64, c);
      CHECK(r.image == serial);
      int rows = 0;
      for (int k : r.stats.rows_per_worker) rows += k;
      CHECK(rows == 64);
      CHECK(r.stats.rows_per_worker.size() == static_cast<std::size_t>(c.total_workers()));
      CHECK(r.stats.counters.primary_rays == 64u * 64u);
      CHECK(r.stats.threads_used == worker_threads_for(c));
    }
  }
}

TEST_CASE("odd sizes and more workers than rows") {
  const Scene s = paper_scene(3);
  const AccelHandle accel = build_linear(s);
  const TraceSettings settings;
  for (auto [w, h] : {std::pair{1, 1}, std::pair{7, 3}, std::pair{13, 5}, std::pair{40, 9}}) {
    const Camera cam = raster_camera(w, h);
    const Framebuffer serial = render_serial(s, cam, accel, settings, w, h);
    for (const NetworkConfig& c : {NetworkConfig{8, 1}, NetworkConfig{3, 5}, NetworkConfig{1, 7}}) {
      const Framebuffer fb = render_framebuffer(s, cam, accel, settings, w, h, c);
      CHECK(fb.values == serial.values);
    }
  }
}

TEST_CASE("thread cap changes the pool size, not the image") {
  const Scene s = paper_scene(2);
  const AccelHandle accel = build_bvh(s);
  const Camera cam = raster_camera(32, 32);
  const RenderResult full = render_parallel(s, cam, accel, {}, 32, 32, {4, 4});
  CHECK(full.stats.threads_used == std::min(16, worker_threads_for({4, 4})));
  ::setenv("STEREOTRACE_THREADS_CAP", "2", 1);
  const RenderResult capped = render_parallel(s, cam, accel, {}, 32, 32, {4, 4});
  ::unsetenv("STEREOTRACE_THREADS_CAP");
  CHECK(capped.stats.threads_used == 2);
  CHECK(capped.image == full.image);
  CHECK(capped.stats.counters.triangle_tests() == full.stats.counters.triangle_tests());
}

TEST_CASE("render rejects a mismatched accel") {
  const Scene s = paper_scene(1);
  CHECK_THROWS_AS(render_parallel(s, default_camera(), build_bvh(paper_scene(2)), {}, 8, 8, {2, 1}), AccelMismatch);
}
