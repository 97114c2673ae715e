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

#include "footprint/image_io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "footprint/error.h"
#include "number_format.h"

namespace footprint::io {
namespace {

double CheckedMax(const Grid<double>& map) {
  double vmax = 0.0;
  for (const double v : map.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteValue, "heatmap value is not finite");
    if (v < 0.0) throw Error(ErrorCode::kInvalidArgument, "heatmap values must be >= 0");
    vmax = std::max(vmax, v);
  }
  return vmax;
}

void WriteBytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

std::string ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::optional<double> vmax;
  std::size_t data_offset = 0;
};

// Netpbm header: magic, then width/height/maxval separated by whitespace with
// '#' comments allowed anywhere before maxval.
PgmHeader ParsePgmHeader(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::kMalformedRecord, "not a binary PGM (P5) file");
  }
  PgmHeader header;
  std::size_t pos = 2;
  int fields[3] = {0, 0, 0};
  for (int f = 0; f < 3; ++f) {
    for (;;) {
      if (pos >= bytes.size()) throw Error(ErrorCode::kMalformedRecord, "truncated PGM header");
      const char c = bytes[pos];
      if (c == '#') {
        const std::size_t end = bytes.find('\n', pos);
        const std::string comment = bytes.substr(pos + 1, end - pos - 1);
        const std::size_t key = comment.find("vmax=");
        if (key != std::string::npos) {
          try {
            header.vmax = std::stod(comment.substr(key + 5));
          } catch (const std::exception&) {
            throw Error(ErrorCode::kMalformedRecord, "bad vmax comment");
          }
        }
        if (end == std::string::npos) throw Error(ErrorCode::kMalformedRecord, "truncated PGM header");
        pos = end + 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    long value = 0;
    bool any = false;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > (1L << 24)) throw Error(ErrorCode::kMalformedRecord, "PGM header value too large");
      any = true;
      ++pos;
    }
    if (!any) throw Error(ErrorCode::kMalformedRecord, "bad PGM header field");
    fields[f] = static_cast<int>(value);
  }
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw Error(ErrorCode::kMalformedRecord, "missing whitespace after PGM maxval");
  }
  header.width = fields[0];
  header.height = fields[1];
  header.maxval = fields[2];
  header.data_offset = pos + 1;
  if (header.width <= 0 || header.height <= 0 || header.maxval <= 0 || header.maxval > 65535) {
    throw Error(ErrorCode::kMalformedRecord, "invalid PGM dimensions or maxval");
  }
  const std::size_t bytes_per = header.maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(header.width) * header.height * bytes_per;
  if (bytes.size() - header.data_offset < need) {
    throw Error(ErrorCode::kMalformedRecord, "PGM payload is truncated");
  }
  return header;
}

Grid<int> Samples(const std::string& bytes, const PgmHeader& h) {
  Grid<int> out(h.height, h.width);
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data() + h.data_offset);
  const bool wide = h.maxval > 255;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.at_flat(i) = wide ? (data[2 * i] << 8) | data[2 * i + 1] : data[i];
  }
  return out;
}

void WritePng8(const Grid<double>& map, double vmax, const std::filesystem::path& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.c_str(), "wb"),
                                                       &std::fclose);
  if (!file) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw Error(ErrorCode::kIoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIoError, "png_create_info_struct failed");
  }
  std::vector<png_byte> row(static_cast<std::size_t>(map.cols()));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIoError, "libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(map.cols()),
               static_cast<png_uint_32>(map.rows()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < map.rows(); ++r) {
    for (int c = 0; c < map.cols(); ++c) {
      const double scaled = vmax > 0.0 ? 255.0 * map(r, c) / vmax : 0.0;
      row[static_cast<std::size_t>(c)] = static_cast<png_byte>(std::lround(scaled));
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void AppendFloatLE(std::string& out, float f) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

float ReadFloatLE(const unsigned char* p) {
  const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                             (static_cast<std::uint32_t>(p[1]) << 8) |
                             (static_cast<std::uint32_t>(p[2]) << 16) |
                             (static_cast<std::uint32_t>(p[3]) << 24);
  return std::bit_cast<float>(bits);
}

}  // namespace

std::string EncodePgm16(const Grid<double>& map) {
  const double vmax = CheckedMax(map);
  std::string out = "P5\n# vmax=" + internal::ShortestDouble(vmax) + "\n" +
                    std::to_string(map.cols()) + " " + std::to_string(map.rows()) +
                    "\n65535\n";
  out.reserve(out.size() + 2 * map.size());
  for (const double v : map.values()) {
    const auto q = static_cast<std::uint16_t>(vmax > 0.0 ? std::lround(65535.0 * v / vmax) : 0);
    out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xff));
  }
  return out;
}

void WriteHeatmap(const Grid<double>& map, const std::filesystem::path& path,
                  HeatmapFormat format) {
  switch (format) {
    case HeatmapFormat::kPgm16:
      WriteBytes(path, EncodePgm16(map));
      return;
    case HeatmapFormat::kPng8:
      WritePng8(map, CheckedMax(map), path);
      return;
  }
}

DecodedHeatmap DecodePgm(const std::string& bytes) {
  const PgmHeader header = ParsePgmHeader(bytes);
  const Grid<int> samples = Samples(bytes, header);
  DecodedHeatmap out;
  out.vmax = header.vmax.value_or(1.0);
  out.values = Grid<double>(samples.rows(), samples.cols());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.values.at_flat(i) = static_cast<double>(samples.at_flat(i)) / header.maxval * out.vmax;
  }
  return out;
}

DecodedHeatmap ReadHeatmap(const std::filesystem::path& path) {
  try {
    return DecodePgm(ReadBytes(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

Grid<int> ReadPgmSamples(const std::filesystem::path& path) {
  const std::string bytes = ReadBytes(path);
  try {
    return Samples(bytes, ParsePgmHeader(bytes));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteMask(const BinaryMap& mask, const std::filesystem::path& path) {
  Grid<double> values(mask.rows(), mask.cols());
  for (std::size_t i = 0; i < mask.size(); ++i) values.at_flat(i) = mask.at_flat(i) ? 1.0 : 0.0;
  WriteHeatmap(values, path, HeatmapFormat::kPgm16);
}

std::string EncodeDirectionPfm(const DirectionMap& map) {
  std::string out = "PF\n" + std::to_string(map.cols()) + " " + std::to_string(map.rows()) +
                    "\n-1.0\n";
  out.reserve(out.size() + 12 * map.size());
  for (int r = map.rows() - 1; r >= 0; --r) {
    for (int c = 0; c < map.cols(); ++c) {
      const auto& d = map(r, c);
      AppendFloatLE(out, d ? static_cast<float>(d->du) : 0.0f);
      AppendFloatLE(out, d ? static_cast<float>(d->dv) : 0.0f);
      AppendFloatLE(out, d ? 1.0f : 0.0f);
    }
  }
  return out;
}

void WriteDirectionPfm(const DirectionMap& map, const std::filesystem::path& path) {
  WriteBytes(path, EncodeDirectionPfm(map));
}

DirectionMap ReadDirectionPfm(const std::filesystem::path& path) {
  const std::string bytes = ReadBytes(path);
  std::istringstream in(bytes);
  std::string magic;
  int width = 0;
  int height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  if (!in || magic != "PF" || width <= 0 || height <= 0 || scale >= 0.0) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": expected little-endian PF header");
  }
  const std::size_t offset = static_cast<std::size_t>(in.tellg()) + 1;
  const std::size_t need = static_cast<std::size_t>(width) * height * 12;
  if (bytes.size() < offset + need) {
    throw Error(ErrorCode::kMalformedRecord, path.string() + ": PFM payload is truncated");
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  DirectionMap out(height, width);
  for (int r = height - 1; r >= 0; --r) {
    for (int c = 0; c < width; ++c, p += 12) {
      if (ReadFloatLE(p + 8) != 0.0f) {
        out(r, c) = Direction2{ReadFloatLE(p), ReadFloatLE(p + 4)};
      }
    }
  }
  return out;
}

}  // namespace footprint::io
