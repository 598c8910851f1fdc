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

#include "sensedp/strings.h"

namespace sensedp {

std::vector<std::string_view> SplitNonEmpty(std::string_view text,
                                            std::string_view delims) {
  std::vector<std::string_view> pieces;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find_first_of(delims, pos);
    if (end == std::string_view::npos) end = text.size();
    if (end > pos) pieces.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return pieces;
}

std::vector<std::string_view> Split(std::string_view text, char delim) {
  std::vector<std::string_view> pieces;
  size_t pos = 0;
  while (true) {
    const size_t end = text.find(delim, pos);
    if (end == std::string_view::npos) {
      pieces.push_back(text.substr(pos));
      return pieces;
    }
    pieces.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
}

}  // namespace sensedp
