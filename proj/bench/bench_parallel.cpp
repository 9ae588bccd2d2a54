// Serial vs OpenMP timings for the frame-parallel kernels.
//   bench_parallel [frames]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "handann/batch.hpp"
#include "handann/metrics.hpp"
#include "handann/protocol.hpp"
#include "handann/sampling.hpp"

using namespace handann;

namespace {

double seconds(const std::function<void()>& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, std::size_t n) {
  std::printf("%-12s %10.4f s %10.4f s %8.2fx  (%.0f frames/s parallel)\n", name, serial, parallel, serial / parallel,
              static_cast<double>(n) / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? static_cast<std::size_t>(std::atol(argv[1])) : 50000;
  const HandShape shape = HandShape::default_shape();
  Rng rng(1);
  std::vector<HandPose> poses;
  std::vector<std::int64_t> ts;
  for (std::size_t i = 0; i < n; ++i) {
    poses.push_back(random_pose(rng));
    ts.push_back(static_cast<std::int64_t>(i) * 1389);
  }
  const SimulationParams params{7, 1.0, 1.0};
  const auto sim = simulate_frames_serial(poses, ts, shape, params);
  std::vector<SensorFrame> frames;
  std::vector<Skeleton> truth;
  for (const auto& f : sim) {
    frames.push_back(f.sensors);
    truth.push_back(f.truth);
  }
  const auto est = annotate_frames_serial(frames, shape);
  std::vector<Skeleton> est_sk;
  for (const auto& r : est) est_sk.push_back(r.skeleton);

  std::printf("%zu frames, %d threads\n", n, max_threads());
  std::printf("%-12s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");
  report("simulate", seconds([&] { simulate_frames_serial(poses, ts, shape, params); }),
         seconds([&] { simulate_frames_parallel(poses, ts, shape, params); }), n);
  report("annotate", seconds([&] { annotate_frames_serial(frames, shape); }),
         seconds([&] { annotate_frames_parallel(frames, shape); }), n);
  report("coverage", seconds([&] { coverage_report_serial(poses); }), seconds([&] { coverage_report(poses); }), n);
  report("errors", seconds([&] { error_records_serial(est_sk, truth, all_joints()); }),
         seconds([&] { error_records(est_sk, truth, all_joints()); }), n);
  return 0;
}
