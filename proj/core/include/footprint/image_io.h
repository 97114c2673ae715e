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

#ifndef FOOTPRINT_IMAGE_IO_H_
#define FOOTPRINT_IMAGE_IO_H_

#include <filesystem>
#include <string>

#include "footprint/grid.h"

namespace footprint::io {

enum class HeatmapFormat { kPgm16, kPng8 };

// Non-negative map written as
//   PGM16: "P5\n# vmax=<v>\n<W> <H>\n65535\n" + big-endian samples
//          round(65535 * value / vmax); vmax = max value (all-zero -> "0").
//   PNG8:  8-bit grayscale scaled by vmax, for viewing only.
// Throws NonFiniteValue for NaN/inf, InvalidArgument for negative values and
// IoError on filesystem failures.
void WriteHeatmap(const Grid<double>& map, const std::filesystem::path& path,
                  HeatmapFormat format);

// Encodes the PGM16 payload in memory; WriteHeatmap(kPgm16) writes exactly
// these bytes.
std::string EncodePgm16(const Grid<double>& map);

struct DecodedHeatmap {
  Grid<double> values;  // sample / 65535 * vmax
  double vmax = 0.0;
};

// Reads a P5 PGM. When a "# vmax=" comment is present values are rescaled by
// it; otherwise they are sample / maxval.
DecodedHeatmap ReadHeatmap(const std::filesystem::path& path);
DecodedHeatmap DecodePgm(const std::string& bytes);

// Raw P5 samples without rescaling (8- or 16-bit), e.g. semantic class ids.
Grid<int> ReadPgmSamples(const std::filesystem::path& path);

// Binary mask -> PGM16 with vmax=1.
void WriteMask(const BinaryMap& mask, const std::filesystem::path& path);

// Direction maps as little-endian 3-channel PFM ("PF", scale -1.0, rows
// stored bottom-to-top). Channels are (du, dv, present); absent cells are
// (0, 0, 0).
void WriteDirectionPfm(const DirectionMap& map, const std::filesystem::path& path);
std::string EncodeDirectionPfm(const DirectionMap& map);
DirectionMap ReadDirectionPfm(const std::filesystem::path& path);

}  // namespace footprint::io

#endif  // FOOTPRINT_IMAGE_IO_H_
