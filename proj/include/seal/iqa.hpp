#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "seal/image.hpp"

namespace seal {

enum class Orientation { higher_better, lower_better };
const char* orientation_name(Orientation o);
Orientation orientation_from_name(const std::string& name);

// psnr/ssim are higher-better, lpips lower-better; anything else must be
// given explicitly.
Orientation default_orientation(const std::string& metric_id);

enum class IqaChannel { luma, rgb };

// PSNR on the 8-bit scale (MAX = 255). Identical images return +infinity,
// which propagates as "greater than any finite value" and is excluded from
// averages with a warning. Default channel is Rec. 601 luma.
double psnr(const Image& a, const Image& b, IqaChannel channel = IqaChannel::luma);

// Mean local SSIM: 11x11 Gaussian window (sigma 1.5), C1=(0.01*255)^2,
// C2=(0.03*255)^2, luma channel, windows fully inside the image.
// Requires min side >= 11.
double ssim(const Image& a, const Image& b);

// Per-image cache for pairwise SSIM over a pool: luma plane plus its filtered
// first and second moments. A pair then only needs one more filtering pass.
struct SsimPrecomp {
  int width = 0;
  int height = 0;
  std::vector<double> luma;  // 8-bit scale
  std::vector<double> mu;    // filtered luma, valid region
  std::vector<double> xx;    // filtered luma^2, valid region
};

SsimPrecomp ssim_precompute(const Image& img);
double ssim_from_precomp(const SsimPrecomp& a, const SsimPrecomp& b);

// ---------------------------------------------------------------------------

struct ScoreRow {
  std::string case_id;
  std::string image_id;
  double value = 0.0;
};

struct ScoreTable {
  std::string model_id;
  std::string metric_id;
  Orientation orientation = Orientation::higher_better;
  std::vector<ScoreRow> rows;  // canonically sorted by (case_id, image_id)
};

void sort_canonical(ScoreTable& table);

// CSV with header `model,metric,case_id,image_id,value`; `inf` permitted for
// psnr. Leading '#' lines carry the tool version and config echo.
void write_score_table(const ScoreTable& table, const std::filesystem::path& path,
                       const std::string& config_echo = "");
ScoreTable ingest_scores(const std::filesystem::path& path,
                         const std::string& orientation_override = "");

}  // namespace seal
