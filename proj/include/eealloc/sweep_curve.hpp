#pragma once

#include <vector>

#include "eealloc/model.hpp"

namespace eealloc {

struct SweepSample {
  double power = 0.0;
  double sum_rate = 0.0;
  double ee = 0.0;
  double indicator = 0.0;  ///< sign indicator of dEE/dP
};

/// Samples of the optimal sum rate and efficiency along total power.
struct SweepCurve {
  std::vector<SweepSample> samples;  ///< sorted by power
  Mode mode = Mode::fixed;
  double argmax_power = 0.0;  ///< power of the first max-efficiency sample
};

}  // namespace eealloc
