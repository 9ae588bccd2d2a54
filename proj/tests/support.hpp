#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <doctest.h>

#include "handann/errors.hpp"
#include "handann/geometry.hpp"
#include "handann/hand_model.hpp"

namespace handann::test {

inline double max_joint_error(const Skeleton& a, const Skeleton& b) {
  double m = 0.0;
  for (int j = 0; j < kNumJoints; ++j) m = std::max(m, (a.positions[j] - b.positions[j]).norm());
  return m;
}

inline bool bit_equal(const Skeleton& a, const Skeleton& b) {
  for (int j = 0; j < kNumJoints; ++j) {
    for (int c = 0; c < 3; ++c) {
      const double x = a.positions[j][c], y = b.positions[j][c];
      if (!(x == y || (std::isnan(x) && std::isnan(y)))) return false;
    }
  }
  return a.frame == b.frame;
}

inline Skeleton transformed(const Skeleton& s, const RigidTransform& g) {
  Skeleton out = s;
  for (auto& p : out.positions) p = g.apply(p);
  return out;
}

// Runs f and returns the ErrorKind it threw; fails the test if it didn't.
template <class F>
ErrorKind thrown_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidInput;
}

}  // namespace handann::test
