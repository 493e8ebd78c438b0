#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "seal/image.hpp"
#include "seal/resize.hpp"
#include "seal/rng.hpp"

namespace seal {

enum class StepKind {
  gaussian_blur,
  resize,
  gaussian_noise,
  poisson_noise,
  speckle_noise,
  jpeg,
  final_downsample,
};

const char* step_kind_name(StepKind kind);
StepKind step_kind_from_name(const std::string& name);
bool step_kind_stochastic(StepKind kind);

// One degradation operator with its full parameterization. Noise sigmas are
// recorded on the 8-bit scale (the scale the sampling ranges are quoted in)
// and divided by 255 when applied to [0,1] intensities. Replaying a step with
// its stored noise seed is bit-deterministic.
struct DegradationStep {
  StepKind kind = StepKind::gaussian_blur;

  // gaussian_blur
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double angle = 0.0;  // radians
  int kernel_size = 7;

  // resize
  double scale = 1.0;
  ResizeMode mode = ResizeMode::bilinear;

  // gaussian_noise / speckle_noise (sigma, 8-bit scale); poisson_noise (photon scale)
  double sigma = 0.0;
  double noise_scale = 0.0;
  bool gray = false;

  // jpeg
  int quality = 95;

  // final_downsample
  int scale_factor = 4;

  std::uint64_t noise_seed = 0;  // meaningful for stochastic kinds only

  bool operator==(const DegradationStep&) const = default;
};

// Throws ConfigError when a parameter is outside its legal bound.
void validate_step(const DegradationStep& step);

enum class PipelineFamily { shuffled, high_order };
const char* pipeline_family_name(PipelineFamily family);
PipelineFamily pipeline_family_from_name(const std::string& name);

// A fully parameterized, seeded, replayable degradation sequence. Exactly one
// final_downsample step, always last.
struct DegradationRecipe {
  std::string recipe_id;
  PipelineFamily family = PipelineFamily::shuffled;
  std::vector<DegradationStep> steps;
  int scale_factor = 4;
  std::uint64_t source_seed = 0;

  bool operator==(const DegradationRecipe&) const = default;
};

void validate_recipe(const DegradationRecipe& recipe);

// Sampling ranges for both pipeline families. Defaults are this artifact's
// conventions (documented in the README), not reproductions of any published
// pipeline.
struct PipelineConfig {
  std::array<double, 2> family_probs{0.5, 0.5};  // {shuffled, high_order}
  int high_order_rounds = 2;
  int scale_factor = 4;

  std::array<double, 2> blur_sigma_range{0.1, 4.0};
  std::array<int, 2> kernel_size_range{7, 21};  // odd
  double isotropic_probability = 0.5;
  std::array<double, 2> noise_sigma_range{1.0, 40.0};  // 8-bit scale
  std::array<double, 2> poisson_scale_range{30.0, 3000.0};
  double gray_noise_probability = 0.4;
  std::array<double, 2> resize_scale_range{0.5, 1.5};
  std::array<int, 2> jpeg_quality_range{30, 95};

  bool operator==(const PipelineConfig&) const = default;
};

void validate_config(const PipelineConfig& config);

// Applies a single operator. Stochastic steps draw exclusively from the
// step's own noise seed; dimensions change only for the resize kinds.
Image apply_step(const Image& image, const DegradationStep& step);

// Full composition. Requires image dims divisible by the recipe's scale
// factor; the final_downsample step lands exactly on dims / scale_factor
// regardless of the intermediate resizes.
Image apply_recipe(const Image& image, const DegradationRecipe& recipe);

// Draws a recipe from the family mixture: the shuffled family permutes the
// {blur, resize, noise, jpeg} stages; the high-order family repeats
// blur->resize->noise->jpeg for `high_order_rounds` rounds. Both end with
// final_downsample. Every stochastic step receives a fresh seed from `rng`.
DegradationRecipe sample_recipe(SeededRng& rng, const PipelineConfig& config);

// Lossless, schema-versioned JSON round trip (one document per recipe).
std::string serialize_recipe(const DegradationRecipe& recipe);
DegradationRecipe parse_recipe(const std::string& text);

}  // namespace seal
