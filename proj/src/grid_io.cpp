/* Copyright 2026 The attreval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "attreval/grid_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "attreval/error.hpp"
#include "json.hpp"

namespace attreval {

static_assert(std::endian::native == std::endian::little,
              "AGRD encoding assumes a little-endian host");

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kCorruption: return "corruption error";
    case ErrorCode::kValidation: return "validation error";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kResolution: return "resolution error";
    case ErrorCode::kDomain: return "domain error";
    case ErrorCode::kInsufficientData: return "insufficient-data error";
    case ErrorCode::kDegenerateSample: return "degenerate-sample error";
  }
  return "error";
}

void AttributionMap::Validate() const {
  if (height == 0 || width == 0) {
    Fail(ErrorCode::kValidation, "attribution map has zero dimension");
  }
  if (values.size() != std::size_t{height} * width) {
    Fail(ErrorCode::kValidation, "attribution map value count does not match " +
                                     std::to_string(height) + "x" +
                                     std::to_string(width));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      Fail(ErrorCode::kValidation,
           "attribution map has non-finite value at index " + std::to_string(i));
    }
  }
}

std::size_t GroundTruthMask::PositiveCount() const {
  std::size_t n = 0;
  for (auto b : bits) n += b;
  return n;
}

void GroundTruthMask::Validate() const {
  if (height == 0 || width == 0) {
    Fail(ErrorCode::kValidation, "mask has zero dimension");
  }
  if (bits.size() != std::size_t{height} * width) {
    Fail(ErrorCode::kValidation, "mask bit count does not match dimensions");
  }
  for (auto b : bits) {
    if (b > 1) Fail(ErrorCode::kValidation, "mask bits must be 0 or 1");
  }
}

namespace {

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t GetU32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
         std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
}

bool HasGridMagic(const std::vector<std::uint8_t>& bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), kGridMagic, 4) == 0;
}

}  // namespace

std::vector<std::uint8_t> EncodeGrid(const AttributionMap& map) {
  map.Validate();
  std::vector<std::uint8_t> out;
  out.reserve(kGridHeaderBytes + 4 * map.size());
  out.insert(out.end(), kGridMagic, kGridMagic + 4);
  out.push_back(kGridVersion);
  PutU32(out, map.height);
  PutU32(out, map.width);
  for (double v : map.values) {
    float f = static_cast<float>(v);
    if (!std::isfinite(f)) {
      Fail(ErrorCode::kValidation, "value overflows binary32");
    }
    PutU32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

AttributionMap DecodeGrid(const std::vector<std::uint8_t>& bytes) {
  if (!HasGridMagic(bytes)) Fail(ErrorCode::kFormat, "missing AGRD magic");
  if (bytes.size() < kGridHeaderBytes) {
    Fail(ErrorCode::kCorruption, "truncated AGRD header");
  }
  if (bytes[4] != kGridVersion) {
    Fail(ErrorCode::kFormat,
         "unsupported AGRD version " + std::to_string(int{bytes[4]}));
  }
  AttributionMap map;
  map.height = GetU32(bytes.data() + 5);
  map.width = GetU32(bytes.data() + 9);
  if (map.height == 0 || map.width == 0) {
    Fail(ErrorCode::kValidation, "AGRD grid has zero dimension");
  }
  const std::uint64_t count = std::uint64_t{map.height} * map.width;
  const std::uint64_t expected = kGridHeaderBytes + 4 * count;
  if (bytes.size() != expected) {
    Fail(ErrorCode::kCorruption,
         "AGRD payload is " + std::to_string(bytes.size()) + " bytes, expected " +
             std::to_string(expected));
  }
  map.values.resize(count);
  const std::uint8_t* p = bytes.data() + kGridHeaderBytes;
  for (std::uint64_t i = 0; i < count; ++i, p += 4) {
    map.values[i] = std::bit_cast<float>(GetU32(p));
  }
  map.Validate();
  return map;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) Fail(ErrorCode::kIo, "read failed: " + path.string());
  return bytes;
}

void WriteFileBytes(const std::filesystem::path& path,
                    const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path.string());
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open for writing: " + path.string());
  out << text;
  if (!out) Fail(ErrorCode::kIo, "write failed: " + path.string());
}

AttributionMap ReadGrid(const std::filesystem::path& path) {
  try {
    return DecodeGrid(ReadFileBytes(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteGrid(const AttributionMap& map, const std::filesystem::path& path) {
  WriteFileBytes(path, EncodeGrid(map));
}

namespace {

// Reads the next whitespace-delimited PGM header token, skipping comments.
std::string NextPgmToken(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
  auto is_space = [](std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  };
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (is_space(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string tok;
  while (pos < bytes.size() && !is_space(bytes[pos]) && bytes[pos] != '#') {
    tok.push_back(static_cast<char>(bytes[pos++]));
  }
  if (tok.empty()) Fail(ErrorCode::kCorruption, "truncated PGM header");
  return tok;
}

std::uint32_t ParsePgmNumber(const std::string& tok) {
  std::uint64_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') Fail(ErrorCode::kFormat, "bad PGM header field '" + tok + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > 0xFFFFFFFFull) Fail(ErrorCode::kFormat, "PGM header field too large");
  }
  return static_cast<std::uint32_t>(v);
}

GroundTruthMask DecodePgm(const std::vector<std::uint8_t>& bytes, int threshold) {
  std::size_t pos = 2;
  GroundTruthMask mask;
  mask.width = ParsePgmNumber(NextPgmToken(bytes, pos));
  mask.height = ParsePgmNumber(NextPgmToken(bytes, pos));
  const std::uint32_t maxval = ParsePgmNumber(NextPgmToken(bytes, pos));
  if (maxval == 0 || maxval > 255) {
    Fail(ErrorCode::kFormat, "only 8-bit PGM (maxval <= 255) is supported");
  }
  if (mask.width == 0 || mask.height == 0) {
    Fail(ErrorCode::kValidation, "PGM has zero dimension");
  }
  ++pos;  // single whitespace byte before the raster
  const std::uint64_t count = std::uint64_t{mask.width} * mask.height;
  if (pos > bytes.size() || bytes.size() - pos < count) {
    Fail(ErrorCode::kCorruption, "truncated PGM raster");
  }
  mask.bits.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    mask.bits[i] = bytes[pos + i] > threshold ? 1 : 0;
  }
  return mask;
}

}  // namespace

GroundTruthMask ReadMask(const std::filesystem::path& path, int binarize_threshold) {
  const auto bytes = ReadFileBytes(path);
  try {
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') {
      return DecodePgm(bytes, binarize_threshold);
    }
    if (HasGridMagic(bytes)) {
      AttributionMap grid = DecodeGrid(bytes);
      GroundTruthMask mask;
      mask.height = grid.height;
      mask.width = grid.width;
      mask.bits.resize(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        mask.bits[i] = grid.values[i] > binarize_threshold ? 1 : 0;
      }
      return mask;
    }
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  Fail(ErrorCode::kFormat, path.string() + ": unsupported mask format (need PGM P5 or AGRD)");
}

void WriteMaskPgm(const GroundTruthMask& mask, const std::filesystem::path& path) {
  mask.Validate();
  std::string header = "P5\n" + std::to_string(mask.width) + " " +
                       std::to_string(mask.height) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + mask.size());
  for (auto b : mask.bits) bytes.push_back(b ? 255 : 0);
  WriteFileBytes(path, bytes);
}

std::string Fnv1a64Hex(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = kHex[h & 0xF];
  return s;
}

namespace {

using nlohmann::json;

const json& Field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    Fail(ErrorCode::kValidation, where + ": missing field '" + key + "'");
  }
  return *it;
}

std::string StringField(const json& obj, const char* key, const std::string& where) {
  const json& v = Field(obj, key, where);
  if (!v.is_string()) Fail(ErrorCode::kValidation, where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& rel) {
  std::filesystem::path p(rel);
  p = p.is_absolute() ? p : base / p;
  if (!std::filesystem::exists(p)) {
    Fail(ErrorCode::kResolution, "referenced file not found: " + p.string());
  }
  return p;
}

}  // namespace

StudyManifest LoadManifest(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kFormat, path.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) Fail(ErrorCode::kValidation, "manifest must be a JSON object");

  const std::filesystem::path base = path.parent_path();
  StudyManifest m;
  m.fingerprint = Fnv1a64Hex(bytes);
  m.study_name = StringField(doc, "study_name", "manifest");
  if (auto it = doc.find("seed"); it != doc.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) Fail(ErrorCode::kValidation, "manifest: seed must be unsigned");
    m.seed = it->get<std::uint64_t>();
  }

  const json& methods = Field(doc, "methods", "manifest");
  if (!methods.is_array() || methods.empty()) {
    Fail(ErrorCode::kValidation, "manifest: 'methods' must be a non-empty array");
  }
  std::set<std::string> method_set;
  for (const auto& v : methods) {
    if (!v.is_string()) Fail(ErrorCode::kValidation, "manifest: method ids must be strings");
    auto id = v.get<std::string>();
    if (!method_set.insert(id).second) {
      Fail(ErrorCode::kValidation, "manifest: duplicate method id '" + id + "'");
    }
    m.methods.push_back(std::move(id));
  }

  const json& images = Field(doc, "images", "manifest");
  if (!images.is_array() || images.empty()) {
    Fail(ErrorCode::kValidation, "manifest: 'images' must be a non-empty array");
  }
  std::set<std::string> image_set;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const json& img = images[i];
    const std::string where = "manifest image #" + std::to_string(i);
    if (!img.is_object()) Fail(ErrorCode::kValidation, where + ": must be an object");
    ImageEntry e;
    e.image_id = StringField(img, "image_id", where);
    if (!image_set.insert(e.image_id).second) {
      Fail(ErrorCode::kValidation, "manifest: duplicate image id '" + e.image_id + "'");
    }
    const std::string where_id = "manifest image '" + e.image_id + "'";
    e.mask_path = Resolve(base, StringField(img, "mask", where_id));
    const json& opp = Field(img, "original_positive_pixels", where_id);
    if (!opp.is_number_integer() || opp.get<std::int64_t>() < 0) {
      Fail(ErrorCode::kValidation, where_id + ": original_positive_pixels must be a nonnegative integer");
    }
    e.original_positive_pixels = opp.get<std::uint64_t>();
    e.class_label = StringField(img, "class_label", where_id);

    const json& grids = Field(img, "grids", where_id);
    if (!grids.is_object()) Fail(ErrorCode::kValidation, where_id + ": 'grids' must be an object");
    for (auto it = grids.begin(); it != grids.end(); ++it) {
      if (!method_set.count(it.key())) {
        Fail(ErrorCode::kValidation, where_id + ": grid for undeclared method '" + it.key() + "'");
      }
    }
    for (const auto& method : m.methods) {
      auto it = grids.find(method);
      if (it == grids.end()) {
        Fail(ErrorCode::kValidation, where_id + ": no grid for method '" + method + "'");
      }
      if (!it->is_string()) Fail(ErrorCode::kValidation, where_id + ": grid path must be a string");
      e.grid_paths.push_back(Resolve(base, it->get<std::string>()));
    }
    m.images.push_back(std::move(e));
  }
  return m;
}

}  // namespace attreval
