#include "handann/sync.hpp"

#include <cmath>
#include <cstdlib>

#include "handann/errors.hpp"

namespace handann {

namespace {

void require_increasing(std::span<const TimedEvent> s, const char* name) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].timestamp_us < 0) throw Error(ErrorKind::InvalidInput, std::string(name) + " stream has a negative timestamp");
    if (i > 0 && s[i].timestamp_us <= s[i - 1].timestamp_us) {
      throw Error(ErrorKind::Unsorted, std::string(name) + " stream is not strictly increasing at index " +
                                           std::to_string(i));
    }
  }
}

}  // namespace

std::vector<SyncPair> align(std::span<const TimedEvent> depth, std::span<const TimedEvent> sensors) {
  if (sensors.empty()) throw Error(ErrorKind::NoPairs, "sensor stream is empty");
  require_increasing(depth, "depth");
  require_increasing(sensors, "sensor");

  std::vector<SyncPair> out;
  out.reserve(depth.size());
  const std::int64_t first = sensors.front().timestamp_us;
  const std::int64_t last = sensors.back().timestamp_us;
  std::size_t j = 0;
  for (const TimedEvent& d : depth) {
    // Advance while the next sensor event is strictly closer.
    while (j + 1 < sensors.size() &&
           std::llabs(sensors[j + 1].timestamp_us - d.timestamp_us) < std::llabs(sensors[j].timestamp_us - d.timestamp_us)) {
      ++j;
    }
    SyncPair p;
    p.depth_id = d.id;
    p.sensor_id = sensors[j].id;
    p.gap_us = std::llabs(sensors[j].timestamp_us - d.timestamp_us);
    p.extrapolated = d.timestamp_us < first || d.timestamp_us > last;
    out.push_back(p);
  }
  return out;
}

GapStats gap_stats(std::span<const SyncPair> pairs, std::int64_t bin_width_us) {
  if (pairs.empty()) throw Error(ErrorKind::InvalidInput, "no pairs to summarise");
  if (bin_width_us <= 0) throw Error(ErrorKind::InvalidInput, "histogram bin width must be positive");
  GapStats s;
  s.bin_width_us = bin_width_us;
  std::int64_t total = 0;
  for (const SyncPair& p : pairs) {
    s.max_us = std::max(s.max_us, p.gap_us);
    total += p.gap_us;
  }
  s.mean_us = static_cast<double>(total) / static_cast<double>(pairs.size());
  s.histogram.assign(static_cast<std::size_t>(s.max_us / bin_width_us + 1), 0);
  for (const SyncPair& p : pairs) ++s.histogram[static_cast<std::size_t>(p.gap_us / bin_width_us)];
  return s;
}

std::vector<TimedEvent> regular_stream(double rate_hz, std::int64_t count, std::int64_t offset_us) {
  if (!(rate_hz > 0)) throw Error(ErrorKind::InvalidInput, "rate must be positive");
  std::vector<TimedEvent> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back({offset_us + std::llround(static_cast<double>(i) * 1e6 / rate_hz), i});
  }
  return out;
}

}  // namespace handann
