// Copyright 2026 The sensedp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SENSEDP_PARALLEL_H_
#define SENSEDP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace sensedp {

// Runs fn(i) for every i in [0, n) on up to `threads` workers. Indices are
// handed out dynamically; fn must only write to state owned by index i.
void ParallelFor(size_t n, int threads, const std::function<void(size_t)>& fn);

}  // namespace sensedp

#endif  // SENSEDP_PARALLEL_H_
