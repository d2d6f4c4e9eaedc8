// Timing comparison of the serial reference kernels against the OpenMP paths
// on a representative frame. Not a correctness test; equality of the two
// paths is asserted in the unit suite.

#include <chrono>
#include <cstdio>

#include "radsub/cfar.hpp"
#include "radsub/geometry.hpp"
#include "radsub/scene.hpp"
#include "radsub/sensing.hpp"

using namespace radsub;

namespace {

template <typename F>
double time_ms(F&& fn, int repeats) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-24s %10.2f ms %10.2f ms %8.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
  SceneConfig cfg;
  cfg.n_frames = 1;
  cfg.rows = 200;
  cfg.cols = 192;
  cfg.clutter_mean = 2.0;
  cfg.seed = 7;
  cfg.targets = {{12.0, 20.0, 0.0, 0.0, 200.0, 1.5, "car", 1, INT_MAX}};
  const Scene scene = gen_scene(cfg);
  const RadarFrame& frame = scene.frames[0];
  const BlockGrid grid = partition(frame, 20, 48);
  const SamplingPlan plan = uniform_plan(grid, 0.2, "bench");
  BasisPursuitOptions solver;
  solver.max_iterations = 300;

  std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  const auto sets_serial = compress_frame(frame, grid, plan, MatrixKind::Bpd, 1, Exec::Serial);
  report("compress_frame",
         time_ms([&] { compress_frame(frame, grid, plan, MatrixKind::Bpd, 1, Exec::Serial); }, 5),
         time_ms([&] { compress_frame(frame, grid, plan, MatrixKind::Bpd, 1, Exec::Parallel); },
                 5));

  report("reconstruct_frame",
         time_ms(
             [&] {
               reconstruct_frame(sets_serial, grid, FrameMeta::of(frame), solver, Exec::Serial);
             },
             1),
         time_ms(
             [&] {
               reconstruct_frame(sets_serial, grid, FrameMeta::of(frame), solver, Exec::Parallel);
             },
             1));

  CfarParams cfar;
  report("cfar_mask", time_ms([&] { cfar_mask(frame, cfar, Exec::Serial); }, 10),
         time_ms([&] { cfar_mask(frame, cfar, Exec::Parallel); }, 10));

  report("polar_to_cartesian",
         time_ms([&] { polar_to_cartesian(frame, 385, frame.range_res, Exec::Serial); }, 10),
         time_ms([&] { polar_to_cartesian(frame, 385, frame.range_res, Exec::Parallel); }, 10));
  return 0;
}
