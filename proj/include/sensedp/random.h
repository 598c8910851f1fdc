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

#ifndef SENSEDP_RANDOM_H_
#define SENSEDP_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sensedp {

using Rng = std::mt19937_64;

// Derives a 64-bit seed for the sub-stream identified by `path` under the
// master seed. Distinct paths yield statistically independent streams, so
// work can be split across threads without changing any drawn value.
uint64_t DeriveSeed(uint64_t master_seed, std::initializer_list<uint64_t> path);

inline Rng SubstreamRng(uint64_t master_seed,
                        std::initializer_list<uint64_t> path) {
  return Rng(DeriveSeed(master_seed, path));
}

}  // namespace sensedp

#endif  // SENSEDP_RANDOM_H_
