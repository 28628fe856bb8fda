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

#ifndef ATTREVAL_SYNTHGEN_HPP_
#define ATTREVAL_SYNTHGEN_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "attreval/grid_io.hpp"

namespace attreval {

// SplitMix64 (Steele, Lea & Flood). Chosen because its output sequence is
// fully specified by a few lines of integer arithmetic, so generated
// fixtures are reproducible from any language.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  // Standard normal via Box-Muller; consumes two draws per call.
  double Normal();

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a base seed and stream indices.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

enum class ArchetypeKind { kConcentrated, kDiffuseSuperpixel, kUniformNoise, kPerfect, kInverted };

const char* ArchetypeKindName(ArchetypeKind kind);
ArchetypeKind ParseArchetypeKind(const std::string& name);

struct Lesion {
  double center_row = 0.0;
  double center_col = 0.0;
  double radius = 1.0;
};

struct ArchetypeSpec {
  std::string method_id;
  ArchetypeKind kind = ArchetypeKind::kConcentrated;
  Lesion lesion;
  double concentration = 3.0;      // decay rate of the concentrated peak
  std::uint32_t superpixel_size = 8;
  double noise_level = 0.0;        // std of additive Gaussian noise
  double background = 0.2;         // off-lesion block value for superpixels
  std::uint64_t seed = 0;

  void Validate() const;
};

// Builds the disk mask and the archetype's attribution map. Deterministic in
// spec (including seed). Throws kDomain if the lesion does not fit.
std::pair<AttributionMap, GroundTruthMask> Generate(const ArchetypeSpec& spec,
                                                    std::uint32_t height,
                                                    std::uint32_t width);

struct RadiusCluster {
  double radius = 4.0;
  double jitter = 0.0;  // radius drawn uniformly from radius +/- jitter
  double weight = 1.0;
};

struct StudySpec {
  std::string study_name = "synthetic";
  std::uint64_t seed = 42;
  std::size_t n_images = 100;
  std::uint32_t height = 64;
  std::uint32_t width = 64;
  std::vector<ArchetypeSpec> methods;        // lesion/seed fields are per image
  std::vector<RadiusCluster> radius_clusters;
  // original_positive_pixels = mask pixel count * original_scale^2
  double original_scale = 1.0;
};

StudySpec ParseStudySpec(const std::string& json_text);
StudySpec LoadStudySpec(const std::filesystem::path& path);

// Seven archetype methods with three well-separated radius clusters.
StudySpec DefaultStudySpec(std::uint64_t seed = 42, std::size_t n_images = 500);

// Writes masks/*.pgm, grids/<method>/*.agrd and manifest.json under out_dir
// and returns the path of the manifest. Byte-identical for identical specs.
std::filesystem::path GenerateStudy(const StudySpec& spec,
                                    const std::filesystem::path& out_dir);

}  // namespace attreval

#endif  // ATTREVAL_SYNTHGEN_HPP_
