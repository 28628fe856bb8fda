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

#include "attreval/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "attreval/error.hpp"
#include "json.hpp"

namespace attreval {

std::uint64_t SplitMix64::Next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double SplitMix64::Uniform() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double SplitMix64::Normal() {
  const double u1 = 1.0 - Uniform();  // (0, 1]
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(seed ^ (a * 0xd1b54a32d192ed03ull) ^ (b * 0x8cb92ba72f3d8dd7ull));
  g.Next();
  return g.Next();
}

const char* ArchetypeKindName(ArchetypeKind kind) {
  switch (kind) {
    case ArchetypeKind::kConcentrated: return "concentrated";
    case ArchetypeKind::kDiffuseSuperpixel: return "diffuse_superpixel";
    case ArchetypeKind::kUniformNoise: return "uniform_noise";
    case ArchetypeKind::kPerfect: return "perfect";
    case ArchetypeKind::kInverted: return "inverted";
  }
  return "?";
}

ArchetypeKind ParseArchetypeKind(const std::string& name) {
  for (auto k : {ArchetypeKind::kConcentrated, ArchetypeKind::kDiffuseSuperpixel,
                 ArchetypeKind::kUniformNoise, ArchetypeKind::kPerfect,
                 ArchetypeKind::kInverted}) {
    if (name == ArchetypeKindName(k)) return k;
  }
  Fail(ErrorCode::kValidation, "unknown archetype kind '" + name + "'");
}

void ArchetypeSpec::Validate() const {
  if (!(lesion.radius >= 1.0)) Fail(ErrorCode::kDomain, "lesion radius must be >= 1");
  if (superpixel_size < 1) Fail(ErrorCode::kDomain, "superpixel_size must be >= 1");
  if (!(noise_level >= 0.0)) Fail(ErrorCode::kDomain, "noise_level must be >= 0");
  if (!(concentration > 0.0)) Fail(ErrorCode::kDomain, "concentration must be positive");
}

std::pair<AttributionMap, GroundTruthMask> Generate(const ArchetypeSpec& spec,
                                                    std::uint32_t height,
                                                    std::uint32_t width) {
  spec.Validate();
  if (height == 0 || width == 0) Fail(ErrorCode::kDomain, "grid has zero dimension");
  const Lesion& l = spec.lesion;
  if (l.center_row - l.radius < 0.0 || l.center_col - l.radius < 0.0 ||
      l.center_row + l.radius > height - 1.0 || l.center_col + l.radius > width - 1.0) {
    Fail(ErrorCode::kDomain, "lesion does not fit inside the grid");
  }

  const std::size_t n = std::size_t{height} * width;
  GroundTruthMask mask;
  mask.height = height;
  mask.width = width;
  mask.bits.resize(n);
  std::vector<double> dist(n);
  for (std::uint32_t r = 0; r < height; ++r) {
    for (std::uint32_t c = 0; c < width; ++c) {
      const double dr = r - l.center_row;
      const double dc = c - l.center_col;
      const std::size_t i = std::size_t{r} * width + c;
      dist[i] = std::sqrt(dr * dr + dc * dc);
      mask.bits[i] = dr * dr + dc * dc <= l.radius * l.radius ? 1 : 0;
    }
  }
  mask.original_positive_pixels = mask.PositiveCount();

  AttributionMap map;
  map.height = height;
  map.width = width;
  map.method_id = spec.method_id;
  map.values.resize(n);
  SplitMix64 rng(spec.seed);
  const double noise = spec.noise_level;

  switch (spec.kind) {
    case ArchetypeKind::kConcentrated:
      for (std::size_t i = 0; i < n; ++i) {
        map.values[i] = std::exp(-spec.concentration * dist[i] / l.radius);
        if (noise > 0.0) map.values[i] += noise * rng.Normal();
      }
      break;
    case ArchetypeKind::kDiffuseSuperpixel: {
      const std::uint32_t s = spec.superpixel_size;
      const std::uint32_t rows = (height + s - 1) / s;
      const std::uint32_t cols = (width + s - 1) / s;
      for (std::uint32_t br = 0; br < rows; ++br) {
        for (std::uint32_t bc = 0; bc < cols; ++bc) {
          const std::uint32_t r1 = std::min(height, (br + 1) * s);
          const std::uint32_t c1 = std::min(width, (bc + 1) * s);
          bool on_lesion = false;
          for (std::uint32_t r = br * s; r < r1 && !on_lesion; ++r) {
            for (std::uint32_t c = bc * s; c < c1; ++c) {
              if (mask.bits[std::size_t{r} * width + c]) {
                on_lesion = true;
                break;
              }
            }
          }
          double v = on_lesion ? 1.0 : spec.background;
          if (noise > 0.0) v += noise * rng.Normal();
          for (std::uint32_t r = br * s; r < r1; ++r) {
            for (std::uint32_t c = bc * s; c < c1; ++c) {
              map.values[std::size_t{r} * width + c] = v;
            }
          }
        }
      }
      break;
    }
    case ArchetypeKind::kUniformNoise:
      for (auto& v : map.values) v = rng.Uniform();
      break;
    case ArchetypeKind::kPerfect:
    case ArchetypeKind::kInverted: {
      const bool invert = spec.kind == ArchetypeKind::kInverted;
      for (std::size_t i = 0; i < n; ++i) {
        map.values[i] = invert ? 1.0 - mask.bits[i] : mask.bits[i];
        if (noise > 0.0) map.values[i] += noise * rng.Normal();
      }
      break;
    }
  }
  // Grids are stored as binary32; round now so in-memory and on-disk agree.
  for (auto& v : map.values) v = static_cast<float>(v);
  return {std::move(map), std::move(mask)};
}

namespace {

using nlohmann::json;

template <typename T>
T Get(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    Fail(ErrorCode::kValidation, std::string("synth spec: bad value for '") + key + "'");
  }
}

}  // namespace

StudySpec ParseStudySpec(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Fail(ErrorCode::kFormat, std::string("synth spec: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) Fail(ErrorCode::kValidation, "synth spec must be a JSON object");
  StudySpec spec;
  spec.study_name = Get<std::string>(doc, "study_name", spec.study_name);
  spec.seed = Get<std::uint64_t>(doc, "seed", spec.seed);
  spec.n_images = Get<std::size_t>(doc, "n_images", spec.n_images);
  spec.height = Get<std::uint32_t>(doc, "height", spec.height);
  spec.width = Get<std::uint32_t>(doc, "width", spec.width);
  spec.original_scale = Get<double>(doc, "original_scale", spec.original_scale);
  if (spec.n_images < 1) Fail(ErrorCode::kValidation, "synth spec: n_images must be >= 1");

  auto methods = doc.find("methods");
  if (methods == doc.end() || !methods->is_array() || methods->empty()) {
    Fail(ErrorCode::kValidation, "synth spec: 'methods' must be a non-empty array");
  }
  for (const auto& m : *methods) {
    ArchetypeSpec a;
    a.method_id = Get<std::string>(m, "method_id", "");
    if (a.method_id.empty() || a.method_id.find_first_of("/\\") != std::string::npos) {
      Fail(ErrorCode::kValidation, "synth spec: each method needs a plain method_id");
    }
    a.kind = ParseArchetypeKind(Get<std::string>(m, "kind", ""));
    a.concentration = Get<double>(m, "concentration", a.concentration);
    a.superpixel_size = Get<std::uint32_t>(m, "superpixel_size", a.superpixel_size);
    a.noise_level = Get<double>(m, "noise_level", a.noise_level);
    a.background = Get<double>(m, "background", a.background);
    spec.methods.push_back(std::move(a));
  }
  if (auto rc = doc.find("radius_clusters"); rc != doc.end()) {
    if (!rc->is_array()) Fail(ErrorCode::kValidation, "synth spec: radius_clusters must be an array");
    for (const auto& c : *rc) {
      RadiusCluster cl;
      cl.radius = Get<double>(c, "radius", cl.radius);
      cl.jitter = Get<double>(c, "jitter", cl.jitter);
      cl.weight = Get<double>(c, "weight", cl.weight);
      if (!(cl.weight > 0.0) || !(cl.radius >= 1.0) || cl.jitter < 0.0) {
        Fail(ErrorCode::kValidation, "synth spec: bad radius cluster");
      }
      spec.radius_clusters.push_back(cl);
    }
  }
  if (spec.radius_clusters.empty()) spec.radius_clusters = DefaultStudySpec().radius_clusters;
  return spec;
}

StudySpec LoadStudySpec(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  return ParseStudySpec(std::string(bytes.begin(), bytes.end()));
}

StudySpec DefaultStudySpec(std::uint64_t seed, std::size_t n_images) {
  StudySpec s;
  s.study_name = "archetypes";
  s.seed = seed;
  s.n_images = n_images;
  s.height = 64;
  s.width = 64;
  auto add = [&](std::string id, ArchetypeKind kind, double conc, std::uint32_t sp,
                 double noise) {
    ArchetypeSpec a;
    a.method_id = std::move(id);
    a.kind = kind;
    a.concentration = conc;
    a.superpixel_size = sp;
    a.noise_level = noise;
    s.methods.push_back(std::move(a));
  };
  add("concentrated_sharp", ArchetypeKind::kConcentrated, 4.0, 8, 0.05);
  add("concentrated_soft", ArchetypeKind::kConcentrated, 1.5, 8, 0.05);
  add("superpixel_fine", ArchetypeKind::kDiffuseSuperpixel, 3.0, 4, 0.02);
  add("superpixel_coarse", ArchetypeKind::kDiffuseSuperpixel, 3.0, 8, 0.02);
  add("uniform_noise", ArchetypeKind::kUniformNoise, 3.0, 8, 0.0);
  add("perfect", ArchetypeKind::kPerfect, 3.0, 8, 0.0);
  add("inverted", ArchetypeKind::kInverted, 3.0, 8, 0.0);
  s.radius_clusters = {{4.0, 1.0, 1.0}, {8.0, 1.0, 1.0}, {13.0, 1.0, 1.0}};
  return s;
}

std::filesystem::path GenerateStudy(const StudySpec& spec,
                                    const std::filesystem::path& out_dir) {
  if (spec.n_images < 1) Fail(ErrorCode::kValidation, "study needs at least one image");
  if (spec.methods.empty()) Fail(ErrorCode::kValidation, "study needs at least one method");
  if (spec.radius_clusters.empty()) Fail(ErrorCode::kValidation, "study needs radius clusters");
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "masks", ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + (out_dir / "masks").string());
  for (const auto& m : spec.methods) {
    std::filesystem::create_directories(out_dir / "grids" / m.method_id, ec);
    if (ec) Fail(ErrorCode::kIo, "cannot create grid directory for " + m.method_id);
  }

  double total_weight = 0.0;
  for (const auto& c : spec.radius_clusters) total_weight += c.weight;
  const double max_radius = std::floor((std::min(spec.height, spec.width) - 1) / 2.0);
  if (max_radius < 1.0) Fail(ErrorCode::kDomain, "grid too small for a lesion");

  const int digits = std::max<int>(4, static_cast<int>(std::to_string(spec.n_images - 1).size()));
  json manifest;
  manifest["study_name"] = spec.study_name;
  manifest["seed"] = spec.seed;
  json methods = json::array();
  for (const auto& m : spec.methods) methods.push_back(m.method_id);
  manifest["methods"] = methods;
  json images = json::array();

  for (std::size_t i = 0; i < spec.n_images; ++i) {
    SplitMix64 rng(MixSeed(spec.seed, i));
    double pick = rng.Uniform() * total_weight;
    std::size_t cluster = 0;
    while (cluster + 1 < spec.radius_clusters.size() &&
           pick >= spec.radius_clusters[cluster].weight) {
      pick -= spec.radius_clusters[cluster].weight;
      ++cluster;
    }
    const RadiusCluster& rc = spec.radius_clusters[cluster];
    double radius = rc.radius + rc.jitter * (2.0 * rng.Uniform() - 1.0);
    radius = std::clamp(radius, 1.0, max_radius);
    Lesion lesion;
    lesion.radius = radius;
    const double margin = std::ceil(radius);
    auto place = [&](std::uint32_t extent) {
      const double slots = extent - 2.0 * margin;  // integer centers that fit
      return margin + std::floor(rng.Uniform() * slots);
    };
    lesion.center_row = place(spec.height);
    lesion.center_col = place(spec.width);

    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "img_%0*zu", digits, i);
    const std::string image_id = id_buf;
    const std::string mask_rel = "masks/" + image_id + ".pgm";

    json entry;
    entry["image_id"] = image_id;
    entry["mask"] = mask_rel;
    entry["class_label"] = "cluster" + std::to_string(cluster);
    json grids = json::object();
    std::uint64_t positives = 0;
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      ArchetypeSpec a = spec.methods[m];
      a.lesion = lesion;
      a.seed = MixSeed(spec.seed, i, m + 1);
      auto [map, mask] = Generate(a, spec.height, spec.width);
      map.image_id = image_id;
      const std::string grid_rel = "grids/" + a.method_id + "/" + image_id + ".agrd";
      WriteGrid(map, out_dir / grid_rel);
      if (m == 0) {
        WriteMaskPgm(mask, out_dir / mask_rel);
        positives = static_cast<std::uint64_t>(std::llround(
            static_cast<double>(mask.PositiveCount()) * spec.original_scale * spec.original_scale));
      }
      grids[a.method_id] = grid_rel;
    }
    entry["grids"] = grids;
    entry["original_positive_pixels"] = positives;
    images.push_back(std::move(entry));
  }
  manifest["images"] = images;
  const auto path = out_dir / "manifest.json";
  WriteTextFile(path, manifest.dump(2) + "\n");
  return path;
}

}  // namespace attreval
