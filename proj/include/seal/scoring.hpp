#pragma once

#include <filesystem>
#include <string>

#include "seal/iqa.hpp"
#include "seal/metrics.hpp"
#include "seal/testset.hpp"

namespace seal {

// Scores one model's SR outputs against the ground-truth images named by the
// manifest. Expects <sr_dir>/<case-id>/<image-id>.png for every (case, image)
// pair; missing outputs are reported together, not silently skipped. GT
// images are center-cropped to a multiple of the scale factor (the same crop
// the test-set build used).
ScoreTable score_outputs(const std::filesystem::path& sr_dir,
                         const std::filesystem::path& gt_dir,
                         const SETestSetManifest& manifest, const std::string& metric_id,
                         const std::string& model_id, IqaChannel channel = IqaChannel::luma,
                         int threads = 0);

// Per-case mean IQA of a classical upscaler applied to each LR image of the
// manifest; stands in for trained reference lines.
std::vector<double> builtin_line_scores(const SETestSetManifest& manifest,
                                        const std::filesystem::path& gt_dir,
                                        ResizeMode upscaler, const std::string& metric_id,
                                        IqaChannel channel = IqaChannel::luma, int threads = 0);

// Builds a validated LineSet from two built-in upscalers.
LineSet builtin_line(const SETestSetManifest& manifest, const std::filesystem::path& gt_dir,
                     ResizeMode acceptance_upscaler, ResizeMode excellence_upscaler,
                     const std::string& metric_id, IqaChannel channel = IqaChannel::luma,
                     int threads = 0);

}  // namespace seal
