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


#ifndef OTROBUST_SAMPLING_HPP_
#define OTROBUST_SAMPLING_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace otrobust {

struct BoxDomain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  BoxDomain() = default;
  BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi);

  Eigen::Index dim() const { return lower.size(); }
  double volume() const;
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  void validate() const;
};

struct WeightedSample {
  Eigen::VectorXd x;  // state block
  Eigen::VectorXd p;  // parameter block, possibly empty
  double phi = 0.0;   // joint density value
  double log_phi = 0.0;
  double gamma = 0.0; // transport mass
  bool diverged = false;

  Eigen::VectorXd extended() const;
};

struct InitialPdf {
  std::function<double(const Eigen::VectorXd&)> density;
  std::optional<BoxDomain> support;
  bool normalized = true;

  // Zero outside the declared support.
  double operator()(const Eigen::VectorXd& x) const;

  static InitialPdf uniform(const BoxDomain& box);
  // Independent Gaussians truncated to box (unnormalised).
  static InitialPdf truncated_gaussian(const Eigen::VectorXd& mean,
                                       const Eigen::VectorXd& sigma, const BoxDomain& box);
};

double radical_inverse(std::uint64_t index, unsigned base);
// First d primes, d <= 16.
std::vector<unsigned> first_primes(int d);

// Points skip+1 .. skip+n of the Halton sequence mapped into box.
std::vector<Eigen::VectorXd> halton(std::size_t n, const BoxDomain& box,
                                    std::size_t skip = 20);

struct McmcOptions {
  std::size_t burn_in = 2000;
  std::size_t thin = 1;
  double initial_scale = 0.1;  // fraction of box width
  double target_acceptance = 0.3;
  // Starting point; defaults to the box centre.
  std::optional<Eigen::VectorXd> start;
};

struct McmcResult {
  std::vector<Eigen::VectorXd> samples;
  double acceptance_rate = 0.0;
  double final_scale = 0.0;
};

// Random-walk Metropolis.  Requires pdf.support (sets the proposal scale).
McmcResult mcmc_sample(const InitialPdf& pdf, std::size_t n, std::uint64_t seed,
                       const McmcOptions& opts = {});

// Compensated (Neumaier) sum.
double compensated_sum(const std::vector<double>& v);

// Attaches phi = pdf(sample) and gamma = 1/n.  The first state_dim
// coordinates become the state block, the rest the parameter block
// (state_dim < 0 means all coordinates are state).  Off-support samples are
// dropped with a warning on stderr; n counts the kept samples.
std::vector<WeightedSample> weighted_cloud(const std::vector<Eigen::VectorXd>& samples,
                                           const InitialPdf& pdf, int state_dim = -1,
                                           std::size_t* rejected = nullptr);

}  // namespace otrobust

#endif  // OTROBUST_SAMPLING_HPP_
