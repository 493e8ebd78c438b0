#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seal/degrade.hpp"
#include "seal/features.hpp"

namespace seal {

// How SE test sets derive noise for each clean image: `per_image` mixes the
// recipe's noise seeds with a stable hash of the image id (different clean
// images see different noise, everything stays replayable); `frozen` reuses
// the recipe's stored seeds verbatim.
enum class NoiseMode { per_image, frozen };
const char* noise_mode_name(NoiseMode mode);
NoiseMode noise_mode_from_name(const std::string& name);

DegradationRecipe recipe_for_image(const DegradationRecipe& recipe, const std::string& image_id,
                                   NoiseMode mode);

struct PoolEntry {
  std::string image_path;  // relative to the manifest directory
  std::string sha256;
};

struct DegradationPool {
  std::string pool_id;
  std::uint64_t master_seed = 0;
  std::string rng_algorithm;
  int n = 0;
  PipelineConfig config;
  std::vector<std::string> reference_paths;   // as given by the caller
  std::vector<std::string> reference_hashes;
  std::vector<DegradationRecipe> recipes;
  std::vector<std::vector<PoolEntry>> images;  // [reference][sample]
  std::filesystem::path root;                  // directory holding the manifest
};

// Samples n recipes from the seed and applies each to every reference
// (cropped to a multiple of the scale factor). Degraded images are written as
// PNG under <out_dir>/images/refN/, recipes as JSON-lines, and the manifest
// as pool.json.
DegradationPool build_pool(const std::vector<std::filesystem::path>& references, int n,
                           const PipelineConfig& config, std::uint64_t seed,
                           const std::filesystem::path& out_dir, int threads = 0);

DegradationPool read_pool(const std::filesystem::path& manifest_path);

// Loads the pool's degraded images for one reference, in sample order.
std::vector<Image> load_pool_images(const DegradationPool& pool, int reference_index);

std::vector<DegradationRecipe> read_recipes_jsonl(const std::filesystem::path& path);
void write_recipes_jsonl(const std::vector<DegradationRecipe>& recipes,
                         const std::filesystem::path& path);

struct SECaseEntry {
  std::string image_id;
  std::string lr_path;  // relative to the manifest directory
  std::string sha256;
};

struct SECase {
  std::string case_id;
  DegradationRecipe recipe;
  std::vector<SECaseEntry> entries;
};

struct SETestSetManifest {
  std::string testset_id;
  int scale_factor = 4;
  NoiseMode noise_mode = NoiseMode::per_image;
  std::vector<std::string> clean_image_ids;
  std::vector<std::string> clean_image_paths;
  std::vector<std::string> clean_image_hashes;
  std::vector<SECase> cases;
  std::filesystem::path root;

  int case_count() const { return static_cast<int>(cases.size()); }
};

// K recipes x M clean images -> K*M LR files under <out_dir>/cases/<case-id>/,
// manifest with content hashes at <out_dir>/testset.json. The same recipe
// (same derived noise seeds) is used across all clean images of one case.
SETestSetManifest build_se_testset(const std::vector<DegradationRecipe>& recipes,
                                   const std::vector<std::filesystem::path>& clean_images,
                                   const std::filesystem::path& out_dir,
                                   NoiseMode noise_mode = NoiseMode::per_image,
                                   const std::string& testset_id = "", int threads = 0);

SETestSetManifest read_se_testset(const std::filesystem::path& manifest_path);

// Re-hashes every file named by a manifest; returns the list of mismatching
// or missing paths (empty when everything verifies).
std::vector<std::string> verify_pool(const DegradationPool& pool);
std::vector<std::string> verify_se_testset(const SETestSetManifest& manifest);

// --------------------------------------------------------------- toys ------

enum class ToyKind { blur100, noise100, bn100 };
const char* toy_kind_name(ToyKind kind);
ToyKind toy_kind_from_name(const std::string& name);

struct ToyItem {
  std::string image_path;  // relative to the manifest directory
  double parameter = 0.0;  // blur sigma or noise sigma
  int label = 0;           // 1-based intensity band
};

struct LabeledToySet {
  ToyKind kind = ToyKind::blur100;
  std::uint64_t seed = 0;
  std::vector<ToyItem> items;
  std::filesystem::path root;
};

// Blur100: 100 images, isotropic blur sigma ~ U[0.1, 4.0], labels 1..4 by the
// bands {[0.1,1.0], (1,2], (2,3], (3,4]}. Noise100: gaussian noise sigma ~
// U[1, 40], labels 1..4 by quartile bands. BN100: union of both, labels 1..8.
LabeledToySet build_toy(ToyKind kind, const std::filesystem::path& reference,
                        std::uint64_t seed, const std::filesystem::path& out_dir,
                        int threads = 0);

LabeledToySet read_toy(const std::filesystem::path& manifest_path);
std::vector<Image> load_toy_images(const LabeledToySet& toy, int threads = 0);

int blur_label(double sigma);
int noise_label(double sigma);

}  // namespace seal
