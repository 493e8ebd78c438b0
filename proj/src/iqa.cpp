#include "seal/iqa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "seal/errors.hpp"
#include "seal/version.hpp"

namespace seal {

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kC1 = 6.5025;    // (0.01*255)^2
constexpr double kC2 = 58.5225;   // (0.03*255)^2

void require_same_dims(const Image& a, const Image& b, const char* who) {
  if (a.width != b.width || a.height != b.height) {
    throw DataError(std::string(who) + ": size mismatch " + std::to_string(a.width) + "x" +
                    std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                    std::to_string(b.height));
  }
}

// Quantized Rec. 601 luma plane on the 0..255 scale.
std::vector<double> luma_plane(const Image& img) {
  std::vector<double> out(static_cast<std::size_t>(img.width) * img.height);
  for (std::size_t p = 0; p < out.size(); ++p) {
    const float* px = &img.data[p * 3];
    out[p] = luma601(quantize_sample(px[0]), quantize_sample(px[1]), quantize_sample(px[2]));
  }
  return out;
}

const std::vector<double>& window_taps() {
  static const std::vector<double> taps = [] {
    std::vector<double> t(kWindow);
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
      const double d = i - kWindow / 2;
      t[i] = std::exp(-0.5 * d * d / (kWindowSigma * kWindowSigma));
      sum += t[i];
    }
    for (double& v : t) v /= sum;
    return t;
  }();
  return taps;
}

// Separable valid-region filter: output is (w-10) x (h-10).
std::vector<double> filter_valid(const std::vector<double>& plane, int w, int h) {
  const auto& taps = window_taps();
  const int ow = w - kWindow + 1;
  const int oh = h - kWindow + 1;
  std::vector<double> horiz(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * plane[static_cast<std::size_t>(y) * w + x + k];
      horiz[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * horiz[static_cast<std::size_t>(y + k) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

}  // namespace

const char* orientation_name(Orientation o) {
  return o == Orientation::higher_better ? "higher-better" : "lower-better";
}

Orientation orientation_from_name(const std::string& name) {
  if (name == "higher-better") return Orientation::higher_better;
  if (name == "lower-better") return Orientation::lower_better;
  throw DataError("unknown orientation: " + name);
}

Orientation default_orientation(const std::string& metric_id) {
  if (metric_id == "psnr" || metric_id == "ssim") return Orientation::higher_better;
  if (metric_id == "lpips") return Orientation::lower_better;
  throw ConfigError("orientation for metric '" + metric_id + "' must be given explicitly");
}

double psnr(const Image& a, const Image& b, IqaChannel channel) {
  require_same_dims(a, b, "psnr");
  double se = 0.0;
  std::size_t n = 0;
  if (channel == IqaChannel::luma) {
    const auto la = luma_plane(a);
    const auto lb = luma_plane(b);
    for (std::size_t i = 0; i < la.size(); ++i) {
      const double d = la[i] - lb[i];
      se += d * d;
    }
    n = la.size();
  } else {
    for (std::size_t i = 0; i < a.data.size(); ++i) {
      const double d = static_cast<double>(quantize_sample(a.data[i])) - quantize_sample(b.data[i]);
      se += d * d;
    }
    n = a.data.size();
  }
  const double mse = se / static_cast<double>(n);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

SsimPrecomp ssim_precompute(const Image& img) {
  if (img.width < kWindow || img.height < kWindow) {
    throw ConfigError("ssim: image sides must be >= 11");
  }
  SsimPrecomp p;
  p.width = img.width;
  p.height = img.height;
  p.luma = luma_plane(img);
  p.mu = filter_valid(p.luma, img.width, img.height);
  std::vector<double> sq(p.luma.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = p.luma[i] * p.luma[i];
  p.xx = filter_valid(sq, img.width, img.height);
  return p;
}

double ssim_from_precomp(const SsimPrecomp& a, const SsimPrecomp& b) {
  if (a.width != b.width || a.height != b.height) throw DataError("ssim: size mismatch");
  std::vector<double> xy(a.luma.size());
  for (std::size_t i = 0; i < xy.size(); ++i) xy[i] = a.luma[i] * b.luma[i];
  const auto mxy = filter_valid(xy, a.width, a.height);
  double total = 0.0;
  for (std::size_t i = 0; i < mxy.size(); ++i) {
    const double mu_x = a.mu[i];
    const double mu_y = b.mu[i];
    const double sxx = a.xx[i] - mu_x * mu_x;
    const double syy = b.xx[i] - mu_y * mu_y;
    const double sxy = mxy[i] - mu_x * mu_y;
    total += ((2.0 * mu_x * mu_y + kC1) * (2.0 * sxy + kC2)) /
             ((mu_x * mu_x + mu_y * mu_y + kC1) * (sxx + syy + kC2));
  }
  return total / static_cast<double>(mxy.size());
}

double ssim(const Image& a, const Image& b) {
  require_same_dims(a, b, "ssim");
  return ssim_from_precomp(ssim_precompute(a), ssim_precompute(b));
}

void sort_canonical(ScoreTable& table) {
  std::sort(table.rows.begin(), table.rows.end(), [](const ScoreRow& x, const ScoreRow& y) {
    if (x.case_id != y.case_id) return x.case_id < y.case_id;
    return x.image_id < y.image_id;
  });
}

void write_score_table(const ScoreTable& table, const std::filesystem::path& path,
                       const std::string& config_echo) {
  ScoreTable sorted = table;
  sort_canonical(sorted);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "# seal-version: " << kToolVersion << "\n";
  if (!config_echo.empty()) out << "# config: " << config_echo << "\n";
  out << "model,metric,case_id,image_id,value\n";
  out.precision(17);
  for (const auto& row : sorted.rows) {
    out << sorted.model_id << ',' << sorted.metric_id << ',' << row.case_id << ','
        << row.image_id << ',';
    if (std::isinf(row.value)) {
      out << "inf";
    } else {
      out << row.value;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

ScoreTable ingest_scores(const std::filesystem::path& path,
                         const std::string& orientation_override) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ScoreTable table;
  std::map<std::pair<std::string, std::string>, int> seen;
  std::string line;
  int line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_done) {
      if (line != "model,metric,case_id,image_id,value") {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": expected header 'model,metric,case_id,image_id,value'");
      }
      header_done = true;
      continue;
    }
    std::stringstream ss(line);
    std::string model, metric, case_id, image_id, value_str;
    if (!std::getline(ss, model, ',') || !std::getline(ss, metric, ',') ||
        !std::getline(ss, case_id, ',') || !std::getline(ss, image_id, ',') ||
        !std::getline(ss, value_str)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    double value;
    if (value_str == "inf" || value_str == "+inf") {
      value = std::numeric_limits<double>::infinity();
    } else {
      std::size_t pos = 0;
      try {
        value = std::stod(value_str, &pos);
      } catch (const std::exception&) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad value '" +
                        value_str + "'");
      }
      if (pos != value_str.size() || std::isnan(value)) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad value '" +
                        value_str + "'");
      }
    }
    if (table.rows.empty()) {
      table.model_id = model;
      table.metric_id = metric;
    } else if (model != table.model_id || metric != table.metric_id) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": mixed model/metric ids in one table");
    }
    if (!seen.emplace(std::make_pair(case_id, image_id), line_no).second) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": duplicate key (" +
                      case_id + "," + image_id + ")");
    }
    table.rows.push_back({case_id, image_id, value});
  }
  if (!header_done) throw DataError(path.string() + ": missing header");
  table.orientation = orientation_override.empty()
                          ? default_orientation(table.metric_id)
                          : orientation_from_name(orientation_override);
  sort_canonical(table);
  return table;
}

}  // namespace seal
