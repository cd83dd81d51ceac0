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


#include "otrobust/sampling.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <string>

#include "otrobust/error.hpp"

namespace otrobust {

BoxDomain::BoxDomain(Eigen::VectorXd lo, Eigen::VectorXd hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  validate();
}

void BoxDomain::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw InvalidInput("box: bound vectors must be nonempty and of equal length");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!(lower(i) < upper(i)) || !std::isfinite(lower(i)) || !std::isfinite(upper(i)))
      throw InvalidInput("box: need finite lower < upper in every dimension");
}

double BoxDomain::volume() const { return (upper - lower).prod(); }

bool BoxDomain::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != lower.size()) return false;
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

Eigen::VectorXd WeightedSample::extended() const {
  Eigen::VectorXd e(x.size() + p.size());
  e << x, p;
  return e;
}

double InitialPdf::operator()(const Eigen::VectorXd& x) const {
  if (support && !support->contains(x)) return 0.0;
  return density ? density(x) : 0.0;
}

InitialPdf InitialPdf::uniform(const BoxDomain& box) {
  box.validate();
  const double c = 1.0 / box.volume();
  InitialPdf pdf;
  pdf.density = [c](const Eigen::VectorXd&) { return c; };
  pdf.support = box;
  pdf.normalized = true;
  return pdf;
}

InitialPdf InitialPdf::truncated_gaussian(const Eigen::VectorXd& mean,
                                          const Eigen::VectorXd& sigma,
                                          const BoxDomain& box) {
  box.validate();
  if (mean.size() != box.dim() || sigma.size() != box.dim() || (sigma.array() <= 0).any())
    throw InvalidInput("truncated_gaussian: bad mean/sigma");
  InitialPdf pdf;
  pdf.density = [mean, sigma](const Eigen::VectorXd& x) {
    return std::exp(-0.5 * ((x - mean).array() / sigma.array()).square().sum());
  };
  pdf.support = box;
  pdf.normalized = false;
  return pdf;
}

double radical_inverse(std::uint64_t index, unsigned base) {
  const double inv = 1.0 / base;
  double f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

std::vector<unsigned> first_primes(int d) {
  if (d < 1 || d > 16) throw InvalidInput("halton: dimension must be in [1, 16]");
  std::vector<unsigned> p;
  for (unsigned c = 2; static_cast<int>(p.size()) < d; ++c) {
    bool prime = true;
    for (unsigned q : p)
      if (c % q == 0) {
        prime = false;
        break;
      }
    if (prime) p.push_back(c);
  }
  return p;
}

std::vector<Eigen::VectorXd> halton(std::size_t n, const BoxDomain& box, std::size_t skip) {
  if (n == 0) throw InvalidInput("halton: n must be positive");
  box.validate();
  const auto bases = first_primes(static_cast<int>(box.dim()));
  std::vector<Eigen::VectorXd> out(n, Eigen::VectorXd(box.dim()));
  for (std::size_t k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < box.dim(); ++i) {
      const double u = radical_inverse(skip + k + 1, bases[static_cast<std::size_t>(i)]);
      out[k](i) = box.lower(i) + u * (box.upper(i) - box.lower(i));
    }
  return out;
}

McmcResult mcmc_sample(const InitialPdf& pdf, std::size_t n, std::uint64_t seed,
                       const McmcOptions& opts) {
  if (n == 0) throw InvalidInput("mcmc_sample: n must be positive");
  if (!pdf.support) throw InvalidInput("mcmc_sample: density needs a bounded support");
  const BoxDomain& box = *pdf.support;
  const Eigen::Index d = box.dim();
  const Eigen::VectorXd width = box.upper - box.lower;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::VectorXd x = opts.start ? *opts.start : Eigen::VectorXd(0.5 * (box.lower + box.upper));
  double fx = pdf(x);
  if (!(fx > 0.0)) throw InvalidInput("mcmc_sample: start point has zero density");

  double scale = opts.initial_scale;
  std::size_t window_acc = 0, window = 0;
  auto step = [&]() {
    Eigen::VectorXd y(d);
    for (Eigen::Index i = 0; i < d; ++i) y(i) = x(i) + scale * width(i) * normal(rng);
    const double fy = pdf(y);
    if (fy > 0.0 && unif(rng) * fx < fy) {
      x = y;
      fx = fy;
      return true;
    }
    return false;
  };

  for (std::size_t k = 0; k < opts.burn_in; ++k) {
    window_acc += step() ? 1 : 0;
    if (++window == 100) {
      const double rate = static_cast<double>(window_acc) / 100.0;
      scale *= std::exp(rate - opts.target_acceptance);
      window = window_acc = 0;
    }
  }

  McmcResult res;
  res.samples.reserve(n);
  const std::size_t thin = std::max<std::size_t>(1, opts.thin);
  std::size_t accepted = 0, total = 0;
  while (res.samples.size() < n) {
    for (std::size_t k = 0; k < thin; ++k) {
      accepted += step() ? 1 : 0;
      ++total;
    }
    res.samples.push_back(x);
  }
  res.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(total);
  res.final_scale = scale;
  std::clog << "mcmc_sample: acceptance rate " << res.acceptance_rate << "\n";
  if (res.acceptance_rate < 0.01)
    throw DegenerateProposal("mcmc_sample: acceptance rate " +
                             std::to_string(res.acceptance_rate) + " below 1%");
  return res;
}

double compensated_sum(const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (double x : v) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

std::vector<WeightedSample> weighted_cloud(const std::vector<Eigen::VectorXd>& samples,
                                           const InitialPdf& pdf, int state_dim,
                                           std::size_t* rejected) {
  std::vector<WeightedSample> out;
  out.reserve(samples.size());
  std::size_t dropped = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const Eigen::VectorXd& s = samples[k];
    const double phi = pdf(s);
    if (!(phi > 0.0) || !std::isfinite(phi)) {
      ++dropped;
      std::cerr << "weighted_cloud: sample " << k << " is off the support; rejected\n";
      continue;
    }
    const Eigen::Index nx = state_dim < 0 ? s.size() : std::min<Eigen::Index>(state_dim, s.size());
    WeightedSample w;
    w.x = s.head(nx);
    w.p = s.tail(s.size() - nx);
    w.phi = phi;
    w.log_phi = std::log(phi);
    out.push_back(std::move(w));
  }
  if (rejected) *rejected = dropped;
  if (out.empty()) throw InvalidInput("weighted_cloud: every sample is off the support");
  const double g = 1.0 / static_cast<double>(out.size());
  for (auto& w : out) w.gamma = g;
  return out;
}

}  // namespace otrobust
