#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace handann {

struct TimedEvent {
  std::int64_t timestamp_us = 0;
  std::int64_t id = 0;
};

struct SyncPair {
  std::int64_t depth_id = 0;
  std::int64_t sensor_id = 0;
  std::int64_t gap_us = 0;
  bool extrapolated = false;  // depth event outside the sensor stream's span
};

// Nearest-timestamp matching by a two-pointer merge; ties go to the earlier
// sensor event. Both streams must be strictly increasing.
std::vector<SyncPair> align(std::span<const TimedEvent> depth, std::span<const TimedEvent> sensors);

struct GapStats {
  std::int64_t max_us = 0;
  double mean_us = 0.0;
  std::int64_t bin_width_us = 0;
  std::vector<std::int64_t> histogram;  // bin i counts gaps in [i*w, (i+1)*w)
};

GapStats gap_stats(std::span<const SyncPair> pairs, std::int64_t bin_width_us = 50);

// Timestamps round(i * 1e6 / rate_hz) + offset, i = 0..count-1.
std::vector<TimedEvent> regular_stream(double rate_hz, std::int64_t count, std::int64_t offset_us = 0);

}  // namespace handann
