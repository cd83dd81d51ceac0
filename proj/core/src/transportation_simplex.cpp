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


// Transportation simplex: Vogel start, u-v potentials, cycle pivots on the
// spanning-tree basis.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "otrobust/error.hpp"
#include "otrobust/transport.hpp"

namespace otrobust {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Basic {
  std::size_t i, j;
  double flow;
};

class TransportSimplex {
 public:
  TransportSimplex(const std::vector<double>& a, const std::vector<double>& b,
                   const std::vector<double>& c, const LpOptions& opts)
      : m_(a.size()), n_(b.size()), a_(a), b_(b), c_(c), opts_(opts) {
    cmax_ = 0.0;
    for (double x : c_) cmax_ = std::max(cmax_, std::abs(x));
    tol_ = 1e-12 * std::max(1.0, cmax_);
    is_basic_.assign(m_ * n_, false);
  }

  TransportPlan solve() {
    vogel();
    const std::size_t max_pivots = 1000 * (m_ + n_) + 100000;
    std::size_t streak = 0;
    bool bland = false;
    block_start_ = 0;
    for (;;) {
      potentials();
      const std::size_t enter = bland ? price_bland() : price();
      if (enter == kNone) break;
      const double theta = pivot(enter, bland);
      ++pivots_;
      if (theta <= 0.0) {
        if (++streak >= opts_.degenerate_streak) bland = true;
      } else {
        streak = 0;
        bland = false;
      }
      if (pivots_ > max_pivots)
        throw NumericalError("transportation simplex: pivot limit reached");
    }
    TransportPlan plan;
    plan.pivots = pivots_;
    double cost = 0.0;
    for (const Basic& e : basis_) {
      if (e.flow <= 0.0) continue;
      plan.entries.push_back({e.i, e.j, e.flow});
      cost += e.flow * c_[e.i * n_ + e.j];
    }
    std::sort(plan.entries.begin(), plan.entries.end(), [](const PlanEntry& x, const PlanEntry& y) {
      return x.i != y.i ? x.i < y.i : x.j < y.j;
    });
    plan.cost = std::max(0.0, cost);
    plan.W = std::sqrt(plan.cost);
    return plan;
  }

 private:
  double cost(std::size_t i, std::size_t j) const { return c_[i * n_ + j]; }

  void add_basic(std::size_t i, std::size_t j, double flow) {
    basis_.push_back({i, j, flow});
    is_basic_[i * n_ + j] = true;
  }

  // Vogel's approximation; deletes exactly one line per allocation so the
  // result is a spanning tree with m + n - 1 cells.
  void vogel() {
    std::vector<double> s = a_, d = b_;
    std::vector<bool> row_on(m_, true), col_on(n_, true);
    std::size_t rows_left = m_, cols_left = n_;
    struct Best {
      std::size_t k1 = kNone, k2 = kNone;
    };
    std::vector<Best> rb(m_), cb(n_);
    auto scan_row = [&](std::size_t i) {
      Best b;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!col_on[j]) continue;
        if (b.k1 == kNone || cost(i, j) < cost(i, b.k1)) {
          b.k2 = b.k1;
          b.k1 = j;
        } else if (b.k2 == kNone || cost(i, j) < cost(i, b.k2)) {
          b.k2 = j;
        }
      }
      rb[i] = b;
    };
    auto scan_col = [&](std::size_t j) {
      Best b;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_on[i]) continue;
        if (b.k1 == kNone || cost(i, j) < cost(b.k1, j)) {
          b.k2 = b.k1;
          b.k1 = i;
        } else if (b.k2 == kNone || cost(i, j) < cost(b.k2, j)) {
          b.k2 = i;
        }
      }
      cb[j] = b;
    };
    for (std::size_t i = 0; i < m_; ++i) scan_row(i);
    for (std::size_t j = 0; j < n_; ++j) scan_col(j);

    basis_.reserve(m_ + n_ - 1);
    while (rows_left > 0 && cols_left > 0) {
      if (rows_left + cols_left == 1) break;
      // Line with the largest penalty; rows win ties, then lower index.
      double best_pen = -1.0;
      bool is_row = true;
      std::size_t line = kNone;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_on[i]) continue;
        const Best& b = rb[i];
        const double p = b.k2 == kNone ? std::abs(cost(i, b.k1)) : cost(i, b.k2) - cost(i, b.k1);
        if (p > best_pen) {
          best_pen = p;
          is_row = true;
          line = i;
        }
      }
      for (std::size_t j = 0; j < n_; ++j) {
        if (!col_on[j]) continue;
        const Best& b = cb[j];
        const double p = b.k2 == kNone ? std::abs(cost(b.k1, j)) : cost(b.k2, j) - cost(b.k1, j);
        if (p > best_pen) {
          best_pen = p;
          is_row = false;
          line = j;
        }
      }
      const std::size_t i = is_row ? line : cb[line].k1;
      const std::size_t j = is_row ? rb[line].k1 : line;
      const double x = std::min(s[i], d[j]);
      add_basic(i, j, x);
      s[i] -= x;
      d[j] -= x;
      const bool delete_row = (s[i] <= d[j] && rows_left > 1) || cols_left == 1;
      if (delete_row) {
        row_on[i] = false;
        --rows_left;
        for (std::size_t jj = 0; jj < n_; ++jj)
          if (col_on[jj] && (cb[jj].k1 == i || cb[jj].k2 == i)) scan_col(jj);
      } else {
        col_on[j] = false;
        --cols_left;
        for (std::size_t ii = 0; ii < m_; ++ii)
          if (row_on[ii] && (rb[ii].k1 == j || rb[ii].k2 == j)) scan_row(ii);
      }
    }
    if (basis_.size() != m_ + n_ - 1)
      throw NumericalError("transportation simplex: initial basis has wrong size");
  }

  // Potentials plus parent pointers of the basis tree rooted at row 0.
  void potentials() {
    const std::size_t N = m_ + n_;
    adj_.assign(N, {});
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      adj_[basis_[k].i].push_back(k);
      adj_[m_ + basis_[k].j].push_back(k);
    }
    pot_.assign(N, 0.0);
    parent_edge_.assign(N, kNone);
    parent_.assign(N, kNone);
    depth_.assign(N, 0);
    std::vector<bool> seen(N, false);
    std::vector<std::size_t> queue{0};
    seen[0] = true;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const std::size_t u = queue[h];
      for (std::size_t k : adj_[u]) {
        const std::size_t v = u < m_ ? m_ + basis_[k].j : basis_[k].i;
        if (seen[v]) continue;
        seen[v] = true;
        // u_i + v_j = c_ij
        pot_[v] = cost(basis_[k].i, basis_[k].j) - pot_[u];
        parent_[v] = u;
        parent_edge_[v] = k;
        depth_[v] = depth_[u] + 1;
        queue.push_back(v);
      }
    }
    if (queue.size() != N)
      throw NumericalError("transportation simplex: basis is not a spanning tree");
  }

  double reduced(std::size_t i, std::size_t j) const {
    return cost(i, j) - pot_[i] - pot_[m_ + j];
  }

  std::size_t price() {
    const std::size_t total = m_ * n_;
    if (opts_.pricing == Pricing::kDantzig) {
      std::size_t best = kNone;
      double br = -tol_;
      for (std::size_t k = 0; k < total; ++k) {
        if (is_basic_[k]) continue;
        const double r = reduced(k / n_, k % n_);
        if (r < br) {
          br = r;
          best = k;
        }
      }
      return best;
    }
    const std::size_t block =
        std::max<std::size_t>(64, static_cast<std::size_t>(std::sqrt(static_cast<double>(total))));
    std::size_t best = kNone;
    double br = -tol_;
    std::size_t scanned = 0;
    std::size_t k = block_start_;
    while (scanned < total) {
      const std::size_t end = std::min(scanned + block, total);
      for (; scanned < end; ++scanned) {
        if (!is_basic_[k]) {
          const double r = reduced(k / n_, k % n_);
          if (r < br) {
            br = r;
            best = k;
          }
        }
        if (++k == total) k = 0;
      }
      if (best != kNone) break;
    }
    block_start_ = k;
    return best;
  }

  std::size_t price_bland() const {
    for (std::size_t k = 0; k < m_ * n_; ++k)
      if (!is_basic_[k] && reduced(k / n_, k % n_) < -tol_) return k;
    return kNone;
  }

  // Returns the step length theta.
  double pivot(std::size_t enter, bool bland) {
    const std::size_t ei = enter / n_, ej = enter % n_;
    // Tree path from column node of ej to row node of ei.
    std::size_t u = m_ + ej, v = ei;
    std::vector<std::size_t> up_u, up_v;
    while (u != v) {
      if (depth_[u] >= depth_[v]) {
        up_u.push_back(parent_edge_[u]);
        u = parent_[u];
      } else {
        up_v.push_back(parent_edge_[v]);
        v = parent_[v];
      }
    }
    std::vector<std::size_t> cycle = up_u;
    cycle.insert(cycle.end(), up_v.rbegin(), up_v.rend());
    // Entering cell gets +theta; cycle edges alternate starting with -.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = kNone;
    for (std::size_t p = 0; p < cycle.size(); p += 2) {
      const Basic& e = basis_[cycle[p]];
      const bool better =
          e.flow < theta ||
          (bland && e.flow == theta && e.i * n_ + e.j < basis_[leave].i * n_ + basis_[leave].j);
      if (better) {
        theta = e.flow;
        leave = cycle[p];
      }
    }
    for (std::size_t p = 0; p < cycle.size(); ++p) {
      Basic& e = basis_[cycle[p]];
      e.flow = (p % 2 == 0) ? e.flow - theta : e.flow + theta;
    }
    basis_[leave].flow = 0.0;
    is_basic_[basis_[leave].i * n_ + basis_[leave].j] = false;
    basis_[leave] = {ei, ej, theta};
    is_basic_[enter] = true;
    return theta;
  }

  std::size_t m_, n_;
  const std::vector<double>& a_;
  const std::vector<double>& b_;
  const std::vector<double>& c_;
  LpOptions opts_;
  double cmax_ = 0.0, tol_ = 0.0;
  std::vector<Basic> basis_;
  std::vector<bool> is_basic_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<double> pot_;
  std::vector<std::size_t> parent_, parent_edge_, depth_;
  std::size_t block_start_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace

TransportPlan solve_transportation(const std::vector<double>& supply,
                                   const std::vector<double>& demand,
                                   const std::vector<double>& cost, const LpOptions& opts) {
  const std::size_t m = supply.size(), n = demand.size();
  if (m == 0 || n == 0) throw InvalidInput("transportation: empty marginal");
  if (static_cast<double>(m) * static_cast<double>(n) > opts.memory_budget)
    throw SizeError("transportation: m*n = " + std::to_string(m * n) +
                    " coupling variables exceed the memory budget of " +
                    std::to_string(static_cast<long long>(opts.memory_budget)));
  if (cost.size() != m * n) throw InvalidInput("transportation: cost matrix has wrong size");
  double sa = 0.0, sb = 0.0;
  for (double x : supply) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("transportation: bad supply");
    sa += x;
  }
  for (double x : demand) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("transportation: bad demand");
    sb += x;
  }
  if (std::abs(sa - sb) > 1e-12 * std::max(1.0, std::max(sa, sb)))
    throw InvalidInput("transportation: supply and demand do not balance");
  for (double x : cost)
    if (!std::isfinite(x)) throw InvalidInput("transportation: non-finite cost");
  TransportSimplex lp(supply, demand, cost, opts);
  return lp.solve();
}

}  // namespace otrobust
