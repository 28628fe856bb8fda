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

#ifndef ATTREVAL_GRID_IO_HPP_
#define ATTREVAL_GRID_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace attreval {

// Continuous attribution scores for one (image, method) pair, row-major.
// Values are held as double in memory; the AGRD file stores binary32, so a
// write/read round trip is exact for every float-representable value.
struct AttributionMap {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<double> values;
  std::string method_id;
  std::string image_id;

  std::size_t size() const { return values.size(); }

  // Throws kValidation on empty dimensions, size mismatch or non-finite
  // values.
  void Validate() const;
};

struct GroundTruthMask {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<std::uint8_t> bits;  // strictly 0 or 1
  std::uint64_t original_positive_pixels = 0;
  std::string image_id;

  std::size_t size() const { return bits.size(); }
  std::size_t PositiveCount() const;
  void Validate() const;
};

struct ImageEntry {
  std::string image_id;
  std::filesystem::path mask_path;  // resolved against the manifest directory
  std::uint64_t original_positive_pixels = 0;
  std::string class_label;
  // One path per method, in StudyManifest::methods order.
  std::vector<std::filesystem::path> grid_paths;
};

struct StudyManifest {
  std::string study_name;
  std::vector<std::string> methods;
  std::vector<ImageEntry> images;
  std::optional<std::uint64_t> seed;  // present for generated studies
  std::string fingerprint;            // FNV-1a 64 of the manifest bytes, hex

  std::size_t GridCount() const { return methods.size() * images.size(); }
};

inline constexpr char kGridMagic[4] = {'A', 'G', 'R', 'D'};
inline constexpr std::uint8_t kGridVersion = 1;
inline constexpr std::size_t kGridHeaderBytes = 13;
inline constexpr int kDefaultMaskThreshold = 127;

// AGRD layout: "AGRD", u8 version, u32le height, u32le width, then
// height*width binary32 little-endian values, row-major.
std::vector<std::uint8_t> EncodeGrid(const AttributionMap& map);
AttributionMap DecodeGrid(const std::vector<std::uint8_t>& bytes);

AttributionMap ReadGrid(const std::filesystem::path& path);
void WriteGrid(const AttributionMap& map, const std::filesystem::path& path);

// Pixel is positive iff intensity > binarize_threshold. Accepts binary PGM
// (P5, maxval <= 255) or AGRD.
GroundTruthMask ReadMask(const std::filesystem::path& path,
                         int binarize_threshold = kDefaultMaskThreshold);
void WriteMaskPgm(const GroundTruthMask& mask, const std::filesystem::path& path);

StudyManifest LoadManifest(const std::filesystem::path& path);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    const std::vector<std::uint8_t>& bytes);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

std::string Fnv1a64Hex(const std::vector<std::uint8_t>& bytes);

}  // namespace attreval

#endif  // ATTREVAL_GRID_IO_HPP_
