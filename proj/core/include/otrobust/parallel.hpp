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


// Minimal worker pool over an index range.  Results must be written to
// slots keyed by index so that output order never depends on scheduling.

#ifndef OTROBUST_PARALLEL_HPP_
#define OTROBUST_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace otrobust {

// OTROBUST_WORKERS if set (>= 1), else hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, n).  The first exception thrown by any worker is
// rethrown on the calling thread after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned workers = 0);

}  // namespace otrobust

#endif  // OTROBUST_PARALLEL_HPP_
