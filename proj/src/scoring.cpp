#include "seal/scoring.hpp"

#include <map>
#include <sstream>

#include "seal/errors.hpp"
#include "seal/image_io.hpp"
#include "seal/parallel.hpp"

namespace seal {

namespace {

double metric_score(const Image& out, const Image& gt, const std::string& metric_id,
                    IqaChannel channel) {
  if (metric_id == "psnr") return psnr(out, gt, channel);
  if (metric_id == "ssim") return ssim(out, gt);
  throw ConfigError("scoring computes only psnr or ssim; ingest external metrics from CSV");
}

std::map<std::string, Image> load_gt(const SETestSetManifest& manifest,
                                     const std::filesystem::path& gt_dir) {
  std::map<std::string, Image> gt;
  for (const auto& id : manifest.clean_image_ids) {
    std::filesystem::path p;
    for (const char* ext : {".png", ".bmp", ".jpg", ".jpeg"}) {
      const auto candidate = gt_dir / (id + ext);
      if (std::filesystem::exists(candidate)) {
        p = candidate;
        break;
      }
    }
    if (p.empty()) throw IoError("ground truth for image id '" + id + "' not found in " +
                                 gt_dir.string());
    gt.emplace(id, crop_to_multiple(load_image(p), manifest.scale_factor));
  }
  return gt;
}

}  // namespace

ScoreTable score_outputs(const std::filesystem::path& sr_dir,
                         const std::filesystem::path& gt_dir,
                         const SETestSetManifest& manifest, const std::string& metric_id,
                         const std::string& model_id, IqaChannel channel, int threads) {
  const auto gt = load_gt(manifest, gt_dir);

  std::vector<std::pair<const SECase*, const SECaseEntry*>> pairs;
  std::vector<std::string> missing;
  for (const auto& sc : manifest.cases) {
    for (const auto& e : sc.entries) {
      const auto p = sr_dir / sc.case_id / (e.image_id + ".png");
      if (!std::filesystem::exists(p)) {
        missing.push_back(sc.case_id + "/" + e.image_id);
      } else {
        pairs.emplace_back(&sc, &e);
      }
    }
  }
  if (!missing.empty()) {
    std::ostringstream os;
    os << "missing SR outputs (" << missing.size() << "):";
    for (const auto& m : missing) os << ' ' << m;
    throw DataError(os.str());
  }

  ScoreTable table;
  table.model_id = model_id;
  table.metric_id = metric_id;
  table.orientation = default_orientation(metric_id);
  table.rows.resize(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto& [sc, e] = pairs[i];
    const Image out = load_image(sr_dir / sc->case_id / (e->image_id + ".png"));
    const Image& ref = gt.at(e->image_id);
    if (out.width != ref.width || out.height != ref.height) {
      throw DataError("dimension mismatch for " + sc->case_id + "/" + e->image_id + ": SR " +
                      std::to_string(out.width) + "x" + std::to_string(out.height) + " vs GT " +
                      std::to_string(ref.width) + "x" + std::to_string(ref.height));
    }
    table.rows[i] = {sc->case_id, e->image_id, metric_score(out, ref, metric_id, channel)};
  });
  sort_canonical(table);
  return table;
}

std::vector<double> builtin_line_scores(const SETestSetManifest& manifest,
                                        const std::filesystem::path& gt_dir,
                                        ResizeMode upscaler, const std::string& metric_id,
                                        IqaChannel channel, int threads) {
  const auto gt = load_gt(manifest, gt_dir);
  std::vector<double> scores(manifest.cases.size(), 0.0);
  parallel_for(manifest.cases.size(), threads, [&](std::size_t c) {
    const auto& sc = manifest.cases[c];
    double sum = 0.0;
    for (const auto& e : sc.entries) {
      const Image lr = load_image(manifest.root / e.lr_path);
      const Image& ref = gt.at(e.image_id);
      const Image up = resize(lr, ref.width, ref.height, upscaler);
      sum += metric_score(up, ref, metric_id, channel);
    }
    scores[c] = sum / static_cast<double>(sc.entries.size());
  });
  return scores;
}

LineSet builtin_line(const SETestSetManifest& manifest, const std::filesystem::path& gt_dir,
                     ResizeMode acceptance_upscaler, ResizeMode excellence_upscaler,
                     const std::string& metric_id, IqaChannel channel, int threads) {
  std::vector<std::string> case_ids;
  for (const auto& sc : manifest.cases) case_ids.push_back(sc.case_id);
  auto acc = builtin_line_scores(manifest, gt_dir, acceptance_upscaler, metric_id, channel,
                                 threads);
  auto exc = builtin_line_scores(manifest, gt_dir, excellence_upscaler, metric_id, channel,
                                 threads);
  const std::string provenance = std::string("builtin-upscaler(") +
                                 resize_mode_name(acceptance_upscaler) + "/" +
                                 resize_mode_name(excellence_upscaler) + ")";
  return make_line_set(std::move(case_ids), std::move(acc), std::move(exc), metric_id,
                       default_orientation(metric_id), provenance);
}

}  // namespace seal
