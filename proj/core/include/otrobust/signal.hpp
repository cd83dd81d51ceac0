// Copyright 2026 The otrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef OTROBUST_SIGNAL_HPP_
#define OTROBUST_SIGNAL_HPP_

#include <vector>

namespace otrobust {

struct SpectrumPeak {
  double omega = 0.0;  // rad/s
  double amplitude = 0.0;
  std::size_t samples = 0;
};

// Dominant nonzero frequency of y(t) restricted to t in [t0, t1], after
// removing the mean.  Samples must be uniformly spaced.
SpectrumPeak dominant_frequency(const std::vector<double>& t, const std::vector<double>& y,
                                double t0, double t1);

}  // namespace otrobust

#endif  // OTROBUST_SIGNAL_HPP_
