#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "handann/hand_model.hpp"

namespace handann {

std::vector<JointId> all_joints();

// One entry per frame: Euclidean error (mm) of each joint in the subset.
// A joint the estimate lacks (NaN) counts as an infinite error.
struct ErrorRecord {
  std::vector<double> errors;
};

std::vector<double> joint_errors(const Skeleton& est, const Skeleton& gt, std::span<const JointId> subset);

double joints_within(std::span<const ErrorRecord> records, double eps);
double frames_within(std::span<const ErrorRecord> records, double eps);

// Mean over finite errors, summed frame by frame in index order.
double mean_error(std::span<const ErrorRecord> records);

// Frame-parallel joint_errors with index-ordered output.
std::vector<ErrorRecord> error_records(std::span<const Skeleton> est, std::span<const Skeleton> gt,
                                       std::span<const JointId> subset);
std::vector<ErrorRecord> error_records_serial(std::span<const Skeleton> est, std::span<const Skeleton> gt,
                                              std::span<const JointId> subset);

struct Split {
  std::vector<std::int64_t> train;
  std::vector<std::int64_t> validation;
};

// Seeded shuffle, first round(n / 10) ids go to validation. Both halves keep
// input order.
Split split_9_1(std::span<const std::int64_t> frame_ids, std::uint64_t seed);

struct CurveRow {
  double eps;
  double joints;
  double frames;
};
std::vector<CurveRow> curve_export(std::span<const ErrorRecord> records, std::span<const double> eps_grid);

}  // namespace handann
