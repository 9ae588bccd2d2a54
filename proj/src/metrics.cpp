#include "handann/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "handann/errors.hpp"
#include "handann/sampling.hpp"

namespace handann {

namespace {

void require_nonempty(std::span<const ErrorRecord> records) {
  std::size_t total = 0;
  for (const auto& r : records) total += r.errors.size();
  if (records.empty() || total == 0) throw Error(ErrorKind::InvalidInput, "no error records");
}

void require_eps(double eps) {
  if (!(eps >= 0.0)) throw Error(ErrorKind::InvalidInput, "error bound must be >= 0");
}

void check_pair(const Skeleton& est, const Skeleton& gt) {
  if (est.frame != gt.frame) throw Error(ErrorKind::FrameMismatch, "skeletons are in different frames");
}

}  // namespace

std::vector<JointId> all_joints() {
  std::vector<JointId> out;
  for (int i = 0; i < kNumJoints; ++i) out.push_back(static_cast<JointId>(i));
  return out;
}

std::vector<double> joint_errors(const Skeleton& est, const Skeleton& gt, std::span<const JointId> subset) {
  check_pair(est, gt);
  std::vector<double> out;
  out.reserve(subset.size());
  for (JointId j : subset) {
    if (!gt.has(j)) throw Error(ErrorKind::InvalidInput, "ground truth lacks a requested joint");
    out.push_back(est.has(j) ? (est[j] - gt[j]).norm() : std::numeric_limits<double>::infinity());
  }
  return out;
}

double joints_within(std::span<const ErrorRecord> records, double eps) {
  require_nonempty(records);
  require_eps(eps);
  std::int64_t hit = 0, total = 0;
  for (const auto& r : records) {
    for (double e : r.errors) hit += e <= eps;
    total += static_cast<std::int64_t>(r.errors.size());
  }
  return static_cast<double>(hit) / static_cast<double>(total);
}

double frames_within(std::span<const ErrorRecord> records, double eps) {
  require_nonempty(records);
  require_eps(eps);
  std::int64_t hit = 0;
  for (const auto& r : records) {
    const bool ok = std::all_of(r.errors.begin(), r.errors.end(), [&](double e) { return e <= eps; });
    hit += ok;
  }
  return static_cast<double>(hit) / static_cast<double>(records.size());
}

double mean_error(std::span<const ErrorRecord> records) {
  require_nonempty(records);
  double sum = 0.0;
  std::int64_t n = 0;
  for (const auto& r : records) {
    for (double e : r.errors) {
      if (std::isfinite(e)) {
        sum += e;
        ++n;
      }
    }
  }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::infinity();
}

std::vector<ErrorRecord> error_records_serial(std::span<const Skeleton> est, std::span<const Skeleton> gt,
                                              std::span<const JointId> subset) {
  if (est.size() != gt.size()) throw Error(ErrorKind::InvalidInput, "estimate and ground truth differ in length");
  std::vector<ErrorRecord> out(est.size());
  for (std::size_t i = 0; i < est.size(); ++i) out[i].errors = joint_errors(est[i], gt[i], subset);
  return out;
}

std::vector<ErrorRecord> error_records(std::span<const Skeleton> est, std::span<const Skeleton> gt,
                                       std::span<const JointId> subset) {
  if (est.size() != gt.size()) throw Error(ErrorKind::InvalidInput, "estimate and ground truth differ in length");
  for (std::size_t i = 0; i < est.size(); ++i) {
    check_pair(est[i], gt[i]);
    for (JointId j : subset) {
      if (!gt[i].has(j)) throw Error(ErrorKind::InvalidInput, "ground truth lacks a requested joint");
    }
  }
  std::vector<ErrorRecord> out(est.size());
  const auto n = static_cast<std::int64_t>(est.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k].errors = joint_errors(est[k], gt[k], subset);
  }
  return out;
}

Split split_9_1(std::span<const std::int64_t> frame_ids, std::uint64_t seed) {
  if (frame_ids.empty()) throw Error(ErrorKind::InvalidInput, "nothing to split");
  const std::size_t n = frame_ids.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with an explicit engine so the split is identical across
  // standard library implementations.
  Rng rng(split_seed(seed, 0));
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }
  const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) / 10.0));
  std::vector<char> is_val(n, 0);
  for (std::size_t i = 0; i < n_val; ++i) is_val[order[i]] = 1;
  Split s;
  for (std::size_t i = 0; i < n; ++i) (is_val[i] ? s.validation : s.train).push_back(frame_ids[i]);
  return s;
}

std::vector<CurveRow> curve_export(std::span<const ErrorRecord> records, std::span<const double> eps_grid) {
  if (eps_grid.empty()) throw Error(ErrorKind::InvalidInput, "empty error-bound grid");
  if (!std::is_sorted(eps_grid.begin(), eps_grid.end())) throw Error(ErrorKind::Unsorted, "error-bound grid must be sorted");
  std::vector<CurveRow> out;
  out.reserve(eps_grid.size());
  for (double eps : eps_grid) out.push_back({eps, joints_within(records, eps), frames_within(records, eps)});
  return out;
}

}  // namespace handann
