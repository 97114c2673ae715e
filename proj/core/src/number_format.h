/*
 * Copyright 2026 The Footprint Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOOTPRINT_SRC_NUMBER_FORMAT_H_
#define FOOTPRINT_SRC_NUMBER_FORMAT_H_

#include <charconv>
#include <string>
#include <system_error>

namespace footprint::internal {

// Shortest decimal string that parses back to exactly `value`.
inline std::string ShortestDouble(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc()) return "nan";
  return std::string(buf, result.ptr);
}

}  // namespace footprint::internal

#endif  // FOOTPRINT_SRC_NUMBER_FORMAT_H_
