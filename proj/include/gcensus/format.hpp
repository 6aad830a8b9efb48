// Copyright 2026 The gcensus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GCENSUS_FORMAT_HPP
#define GCENSUS_FORMAT_HPP

#include <charconv>
#include <cmath>
#include <string>

namespace gcensus {

/// Locale-independent decimal with 17 significant digits ("nan"/"inf" for non-finite values).
inline std::string format_17g(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

/// Shortest decimal that round-trips.
inline std::string format_shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace gcensus

#endif  // GCENSUS_FORMAT_HPP
