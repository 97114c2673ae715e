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

#include "footprint/sequence_io.h"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "footprint/error.h"
#include "json.hpp"
#include "number_format.h"

namespace footprint::io {
namespace {

using nlohmann::json;
using internal::ShortestDouble;

[[noreturn]] void Malformed(int line, const std::string& reason) {
  throw Error(ErrorCode::kMalformedRecord, reason, line);
}

const json& Field(const json& record, const char* key, int line) {
  const auto it = record.find(key);
  if (it == record.end()) Malformed(line, std::string("missing field '") + key + "'");
  return *it;
}

double Number(const json& record, const char* key, int line) {
  const json& v = Field(record, key, line);
  if (!v.is_number()) Malformed(line, std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) Malformed(line, std::string("field '") + key + "' is not finite");
  return d;
}

std::int64_t Integer(const json& record, const char* key, int line) {
  const json& v = Field(record, key, line);
  if (!v.is_number_integer()) {
    Malformed(line, std::string("field '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string String(const json& record, const char* key, int line) {
  const json& v = Field(record, key, line);
  if (!v.is_string()) Malformed(line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

template <std::size_t N>
std::array<double, N> NumberArray(const json& record, const char* key, int line) {
  const json& v = Field(record, key, line);
  if (!v.is_array() || v.size() != N) {
    Malformed(line, std::string("field '") + key + "' must be an array of " +
                        std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) {
      Malformed(line, std::string("field '") + key + "' must contain only numbers");
    }
    out[i] = v[i].get<double>();
    if (!std::isfinite(out[i])) {
      Malformed(line, std::string("field '") + key + "' contains a non-finite value");
    }
  }
  return out;
}

geometry::CameraIntrinsics ParseIntrinsics(const json& header, int line) {
  const json& k = Field(header, "intrinsics", line);
  if (!k.is_object()) Malformed(line, "'intrinsics' must be an object");
  geometry::CameraIntrinsics out;
  out.fx = Number(k, "fx", line);
  out.fy = Number(k, "fy", line);
  out.cx = Number(k, "cx", line);
  out.cy = Number(k, "cy", line);
  const std::int64_t width = Integer(k, "width", line);
  const std::int64_t height = Integer(k, "height", line);
  if (width <= 0 || height <= 0 || width > (1 << 20) || height > (1 << 20)) {
    throw Error(ErrorCode::kInvariantViolation, "image size out of range", line);
  }
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  try {
    out.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvariantViolation, e.what(), line);
  }
  return out;
}

Frame ParseFrame(const json& record, int line) {
  Frame frame;
  frame.frame_index = Integer(record, "frame_index", line);
  frame.timestamp = Number(record, "timestamp", line);
  const auto r = NumberArray<9>(record, "rotation", line);
  const auto t = NumberArray<3>(record, "translation", line);
  Eigen::Matrix3d rotation;
  rotation << r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8];
  try {
    frame.pose = geometry::RigidTransform::FromRotationTranslation(
        rotation, Eigen::Vector3d(t[0], t[1], t[2]));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidTransform, e.what(), line);
  }
  return frame;
}

PersonObservation ParseObservation(const json& record, int line) {
  PersonObservation obs;
  obs.object_id = String(record, "object_id", line);
  obs.frame_index = Integer(record, "frame_index", line);
  const auto p = NumberArray<3>(record, "foot_point", line);
  obs.foot_point = geometry::Point3(p[0], p[1], p[2]);
  return obs;
}

void WriteArray(std::ostream& out, const double* values, int n) {
  out << '[';
  for (int i = 0; i < n; ++i) {
    if (i > 0) out << ',';
    out << ShortestDouble(values[i]);
  }
  out << ']';
}

}  // namespace

Sequence ParseSequence(std::istream& in) {
  Sequence seq;
  bool have_header = false;
  std::unordered_map<std::int64_t, int> frame_lines;
  std::vector<int> observation_lines;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;

    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      Malformed(line, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) Malformed(line, "record must be a JSON object");
    const std::string type = String(record, "type", line);

    if (type == "header") {
      if (have_header) Malformed(line, "duplicate header record");
      seq.sequence_id = String(record, "sequence_id", line);
      seq.intrinsics = ParseIntrinsics(record, line);
      have_header = true;
      continue;
    }
    if (!have_header) Malformed(line, "the header record must come first");

    if (type == "frame") {
      Frame frame = ParseFrame(record, line);
      if (frame_lines.count(frame.frame_index) != 0) {
        throw Error(ErrorCode::kDuplicateFrameIndex,
                    "frame_index " + std::to_string(frame.frame_index) +
                        " already defined on line " +
                        std::to_string(frame_lines[frame.frame_index]),
                    line);
      }
      if (!seq.frames.empty()) {
        const Frame& prev = seq.frames.back();
        if (frame.frame_index < prev.frame_index) {
          throw Error(ErrorCode::kInvariantViolation,
                      "frames must appear in increasing frame_index", line);
        }
        if (!(frame.timestamp > prev.timestamp)) {
          throw Error(ErrorCode::kInvariantViolation,
                      "timestamps must increase strictly with frame_index", line);
        }
      }
      frame_lines[frame.frame_index] = line;
      seq.frames.push_back(std::move(frame));
    } else if (type == "observation") {
      seq.observations.push_back(ParseObservation(record, line));
      observation_lines.push_back(line);
    } else {
      Malformed(line, "unknown record type '" + type + "'");
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "failed reading sequence stream");
  if (!have_header) Malformed(line + 1, "missing header record");
  if (seq.frames.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "sequence has no frames", line + 1);
  }
  for (std::size_t i = 0; i < seq.observations.size(); ++i) {
    const PersonObservation& obs = seq.observations[i];
    if (frame_lines.count(obs.frame_index) == 0) {
      throw Error(ErrorCode::kInvariantViolation,
                  "observation '" + obs.object_id + "' references missing frame " +
                      std::to_string(obs.frame_index),
                  observation_lines[i]);
    }
  }
  seq.Validate();
  return seq;
}

Sequence ParseSequence(const std::string& text) {
  std::istringstream in(text);
  return ParseSequence(in);
}

Sequence ReadSequenceFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return ParseSequence(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what(), e.line());
  }
}

void WriteSequence(const Sequence& seq, std::ostream& out) {
  seq.Validate();
  const auto& k = seq.intrinsics;
  out << R"({"type":"header","sequence_id":)" << json(seq.sequence_id).dump()
      << R"(,"intrinsics":{"fx":)" << ShortestDouble(k.fx)
      << R"(,"fy":)" << ShortestDouble(k.fy) << R"(,"cx":)" << ShortestDouble(k.cx)
      << R"(,"cy":)" << ShortestDouble(k.cy) << R"(,"width":)" << k.width
      << R"(,"height":)" << k.height << "}}\n";
  for (const Frame& f : seq.frames) {
    double r[9];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) r[3 * i + j] = f.pose.rotation()(i, j);
    }
    const Eigen::Vector3d& t = f.pose.translation();
    const double tv[3] = {t.x(), t.y(), t.z()};
    out << R"({"type":"frame","frame_index":)" << f.frame_index
        << R"(,"timestamp":)" << ShortestDouble(f.timestamp) << R"(,"rotation":)";
    WriteArray(out, r, 9);
    out << R"(,"translation":)";
    WriteArray(out, tv, 3);
    out << "}\n";
  }
  for (const PersonObservation& o : seq.observations) {
    const double p[3] = {o.foot_point.x(), o.foot_point.y(), o.foot_point.z()};
    out << R"({"type":"observation","object_id":)" << json(o.object_id).dump()
        << R"(,"frame_index":)" << o.frame_index << R"(,"foot_point":)";
    WriteArray(out, p, 3);
    out << "}\n";
  }
}

std::string SerializeSequence(const Sequence& sequence) {
  std::ostringstream out;
  WriteSequence(sequence, out);
  return out.str();
}

void WriteSequenceFile(const Sequence& sequence, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot create " + path.string());
  WriteSequence(sequence, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

}  // namespace footprint::io
