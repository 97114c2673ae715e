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

#ifndef FOOTPRINT_SEQUENCE_IO_H_
#define FOOTPRINT_SEQUENCE_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>

#include "footprint/sequence.h"

namespace footprint::io {

// JSON Lines sequence interchange format (see docs/format.md):
//
//   {"type":"header","sequence_id":"s","intrinsics":{"fx":..,"fy":..,"cx":..,"cy":..,"width":W,"height":H}}
//   {"type":"frame","frame_index":0,"timestamp":0.0,"rotation":[9 row-major],"translation":[3]}
//   {"type":"observation","object_id":"p0","frame_index":0,"foot_point":[x,y,z]}
//
// The header comes first, frames follow in increasing frame_index, and
// observations may appear anywhere after the header. Blank lines are ignored.
// Errors carry the 1-based line of the first violation.
Sequence ParseSequence(std::istream& in);
Sequence ParseSequence(const std::string& text);
Sequence ReadSequenceFile(const std::filesystem::path& path);

// Canonical form: header, all frames, then observations in stored order.
// Numbers use the shortest round-trip decimal, so
// ParseSequence(WriteSequence(s)) == s exactly.
void WriteSequence(const Sequence& sequence, std::ostream& out);
std::string SerializeSequence(const Sequence& sequence);
void WriteSequenceFile(const Sequence& sequence, const std::filesystem::path& path);

}  // namespace footprint::io

#endif  // FOOTPRINT_SEQUENCE_IO_H_
