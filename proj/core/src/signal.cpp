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


#include "otrobust/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <fftw3.h>

#include "otrobust/error.hpp"

namespace otrobust {

SpectrumPeak dominant_frequency(const std::vector<double>& t, const std::vector<double>& y,
                                double t0, double t1) {
  if (t.size() != y.size()) throw InvalidInput("dominant_frequency: length mismatch");
  std::vector<double> seg;
  double first = 0.0, last = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t0 - 1e-9 || t[k] > t1 + 1e-9) continue;
    if (seg.empty()) first = t[k];
    last = t[k];
    seg.push_back(y[k]);
  }
  const std::size_t n = seg.size();
  if (n < 4) throw InvalidInput("dominant_frequency: fewer than 4 samples in window");
  const double dt = (last - first) / static_cast<double>(n - 1);
  double mean = 0.0;
  for (double v : seg) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : seg) v -= mean;

  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), seg.data(),
                                        reinterpret_cast<fftw_complex*>(out.data()),
                                        FFTW_ESTIMATE);
  if (plan == nullptr) throw NumericalError("dominant_frequency: FFT plan failed");
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  SpectrumPeak peak;
  peak.samples = n;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const double a = std::abs(out[k]);
    if (a > peak.amplitude) {
      peak.amplitude = a;
      peak.omega = 2.0 * std::numbers::pi * static_cast<double>(k) /
                   (static_cast<double>(n) * dt);
    }
  }
  return peak;
}

}  // namespace otrobust
