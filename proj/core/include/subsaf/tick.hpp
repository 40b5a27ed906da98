#pragma once

#include <vector>

namespace subsaf {

/// One decimated update instant: N regressors of length M (newest sample
/// first, so regressors[i][0] is u_i(kN)) and the N decimated desired samples.
struct SubbandTick {
  std::vector<std::vector<double>> regressors;
  std::vector<double> desired;

  int n_subbands() const { return static_cast<int>(regressors.size()); }
  int filter_len() const {
    return regressors.empty() ? 0 : static_cast<int>(regressors[0].size());
  }
};

}  // namespace subsaf
