#include "seal/degrade.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "seal/errors.hpp"
#include "seal/image_io.hpp"

namespace seal {

namespace {

using ordered_json = nlohmann::ordered_json;

int reflect101(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

// Rotated anisotropic Gaussian, normalized to unit sum. Isotropic is the
// sigma_x == sigma_y special case.
std::vector<double> gaussian_kernel_2d(double sigma_x, double sigma_y, double angle, int size) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double ix = 1.0 / (sigma_x * sigma_x);
  const double iy = 1.0 / (sigma_y * sigma_y);
  const double qa = c * c * ix + s * s * iy;
  const double qb = c * s * (ix - iy);
  const double qc = s * s * ix + c * c * iy;
  const int r = size / 2;
  std::vector<double> k(static_cast<std::size_t>(size) * size);
  double sum = 0.0;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const double q = qa * dx * dx + 2.0 * qb * dx * dy + qc * dy * dy;
      const double v = std::exp(-0.5 * q);
      k[static_cast<std::size_t>(dy + r) * size + (dx + r)] = v;
      sum += v;
    }
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> gaussian_kernel_1d(double sigma, int size) {
  const int r = size / 2;
  std::vector<double> k(size);
  double sum = 0.0;
  for (int d = -r; d <= r; ++d) {
    const double v = std::exp(-0.5 * d * d / (sigma * sigma));
    k[d + r] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

Image convolve_2d(const Image& img, const std::vector<double>& kernel, int size) {
  const int r = size / 2;
  Image out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int dy = -r; dy <= r; ++dy) {
        const int sy = reflect101(y + dy, img.height);
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = reflect101(x + dx, img.width);
          const double w = kernel[static_cast<std::size_t>(dy + r) * size + (dx + r)];
          for (int c = 0; c < 3; ++c) acc[c] += w * img.at(sx, sy, c);
        }
      }
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(acc[c]);
    }
  }
  return out;
}

Image convolve_separable(const Image& img, const std::vector<double>& kx,
                         const std::vector<double>& ky) {
  const int rx = static_cast<int>(kx.size()) / 2;
  const int ry = static_cast<int>(ky.size()) / 2;
  Image tmp = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int d = -rx; d <= rx; ++d) {
        const int sx = reflect101(x + d, img.width);
        const double w = kx[d + rx];
        for (int c = 0; c < 3; ++c) acc[c] += w * img.at(sx, y, c);
      }
      for (int c = 0; c < 3; ++c) tmp.at(x, y, c) = static_cast<float>(acc[c]);
    }
  }
  Image out = img;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int d = -ry; d <= ry; ++d) {
        const int sy = reflect101(y + d, img.height);
        const double w = ky[d + ry];
        for (int c = 0; c < 3; ++c) acc[c] += w * tmp.at(x, sy, c);
      }
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(acc[c]);
    }
  }
  return out;
}

Image apply_blur(const Image& img, const DegradationStep& step) {
  // Axis-aligned and isotropic kernels factor into two 1-D passes.
  if (step.angle == 0.0 || step.sigma_x == step.sigma_y) {
    return convolve_separable(img, gaussian_kernel_1d(step.sigma_x, step.kernel_size),
                              gaussian_kernel_1d(step.sigma_y, step.kernel_size));
  }
  return convolve_2d(img, gaussian_kernel_2d(step.sigma_x, step.sigma_y, step.angle,
                                             step.kernel_size),
                     step.kernel_size);
}

inline float clamp01(double v) {
  return static_cast<float>(v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v));
}

Image apply_gaussian_noise(const Image& img, const DegradationStep& step) {
  if (step.sigma == 0.0) return img;
  SeededRng rng(step.noise_seed);
  const double sigma = step.sigma / 255.0;
  Image out = img;
  const std::size_t pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t p = 0; p < pixels; ++p) {
    float* px = &out.data[p * 3];
    if (step.gray) {
      const double n = rng.normal() * sigma;
      for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] + n);
    } else {
      for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] + rng.normal() * sigma);
    }
  }
  return out;
}

Image apply_poisson_noise(const Image& img, const DegradationStep& step) {
  SeededRng rng(step.noise_seed);
  const double scale = step.noise_scale;
  Image out = img;
  const std::size_t pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t p = 0; p < pixels; ++p) {
    float* px = &out.data[p * 3];
    if (step.gray) {
      const double m = (px[0] + px[1] + px[2]) / 3.0;
      const double noisy = static_cast<double>(rng.poisson(std::max(0.0, m) * scale)) / scale;
      const double delta = noisy - m;
      for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] + delta);
    } else {
      for (int c = 0; c < 3; ++c) {
        const double lam = std::max(0.0, static_cast<double>(px[c])) * scale;
        px[c] = clamp01(static_cast<double>(rng.poisson(lam)) / scale);
      }
    }
  }
  return out;
}

Image apply_speckle_noise(const Image& img, const DegradationStep& step) {
  if (step.sigma == 0.0) return img;
  SeededRng rng(step.noise_seed);
  const double sigma = step.sigma / 255.0;
  Image out = img;
  const std::size_t pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t p = 0; p < pixels; ++p) {
    float* px = &out.data[p * 3];
    if (step.gray) {
      const double m = 1.0 + rng.normal() * sigma;
      for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] * m);
    } else {
      for (int c = 0; c < 3; ++c) px[c] = clamp01(px[c] * (1.0 + rng.normal() * sigma));
    }
  }
  return out;
}

Image apply_jpeg(const Image& img, int quality) {
  const auto bytes = encode_jpeg(to_u8(img), quality);
  return to_real(decode_jpeg(bytes.data(), bytes.size()));
}

// --- sampling helpers --------------------------------------------------

int sample_odd(SeededRng& rng, int lo, int hi) {
  const int nlo = (lo + 1) / 2;  // odd k = 2m+1 with m in [nlo, nhi]
  const int nhi = (hi - 1) / 2;
  return 2 * rng.uniform_int(nlo, nhi) + 1;
}

DegradationStep sample_blur(SeededRng& rng, const PipelineConfig& cfg) {
  DegradationStep s;
  s.kind = StepKind::gaussian_blur;
  s.kernel_size = sample_odd(rng, cfg.kernel_size_range[0], cfg.kernel_size_range[1]);
  s.sigma_x = rng.uniform(cfg.blur_sigma_range[0], cfg.blur_sigma_range[1]);
  if (rng.bernoulli(cfg.isotropic_probability)) {
    s.sigma_y = s.sigma_x;
    s.angle = 0.0;
  } else {
    s.sigma_y = rng.uniform(cfg.blur_sigma_range[0], cfg.blur_sigma_range[1]);
    s.angle = rng.uniform(-1.5707963267948966, 1.5707963267948966);
  }
  return s;
}

DegradationStep sample_resize(SeededRng& rng, const PipelineConfig& cfg) {
  DegradationStep s;
  s.kind = StepKind::resize;
  s.scale = rng.uniform(cfg.resize_scale_range[0], cfg.resize_scale_range[1]);
  const ResizeMode modes[3] = {ResizeMode::area, ResizeMode::bilinear, ResizeMode::bicubic};
  s.mode = modes[rng.uniform_int(0, 2)];
  return s;
}

DegradationStep sample_noise(SeededRng& rng, const PipelineConfig& cfg) {
  DegradationStep s;
  const int which = rng.uniform_int(0, 2);
  s.gray = rng.bernoulli(cfg.gray_noise_probability);
  s.noise_seed = rng.fork_seed();
  if (which == 0) {
    s.kind = StepKind::gaussian_noise;
    s.sigma = rng.uniform(cfg.noise_sigma_range[0], cfg.noise_sigma_range[1]);
  } else if (which == 1) {
    s.kind = StepKind::poisson_noise;
    // log-uniform over the photon-count range (it spans decades)
    const double lo = std::log(cfg.poisson_scale_range[0]);
    const double hi = std::log(cfg.poisson_scale_range[1]);
    s.noise_scale = std::exp(rng.uniform(lo, hi));
  } else {
    s.kind = StepKind::speckle_noise;
    s.sigma = rng.uniform(cfg.noise_sigma_range[0], cfg.noise_sigma_range[1]);
  }
  return s;
}

DegradationStep sample_jpeg(SeededRng& rng, const PipelineConfig& cfg) {
  DegradationStep s;
  s.kind = StepKind::jpeg;
  s.quality = rng.uniform_int(cfg.jpeg_quality_range[0], cfg.jpeg_quality_range[1]);
  return s;
}

}  // namespace

const char* step_kind_name(StepKind kind) {
  switch (kind) {
    case StepKind::gaussian_blur: return "gaussian-blur";
    case StepKind::resize: return "resize";
    case StepKind::gaussian_noise: return "gaussian-noise";
    case StepKind::poisson_noise: return "poisson-noise";
    case StepKind::speckle_noise: return "speckle-noise";
    case StepKind::jpeg: return "jpeg";
    case StepKind::final_downsample: return "final-downsample";
  }
  return "?";
}

StepKind step_kind_from_name(const std::string& name) {
  if (name == "gaussian-blur") return StepKind::gaussian_blur;
  if (name == "resize") return StepKind::resize;
  if (name == "gaussian-noise") return StepKind::gaussian_noise;
  if (name == "poisson-noise") return StepKind::poisson_noise;
  if (name == "speckle-noise") return StepKind::speckle_noise;
  if (name == "jpeg") return StepKind::jpeg;
  if (name == "final-downsample") return StepKind::final_downsample;
  throw DataError("unknown step kind: " + name);
}

bool step_kind_stochastic(StepKind kind) {
  return kind == StepKind::gaussian_noise || kind == StepKind::poisson_noise ||
         kind == StepKind::speckle_noise;
}

void validate_step(const DegradationStep& step) {
  switch (step.kind) {
    case StepKind::gaussian_blur:
      if (step.sigma_x <= 0.0 || step.sigma_x > 16.0 || step.sigma_y <= 0.0 ||
          step.sigma_y > 16.0) {
        throw ConfigError("blur sigma out of (0,16]");
      }
      if (step.kernel_size < 3 || step.kernel_size > 21 || step.kernel_size % 2 == 0) {
        throw ConfigError("blur kernel size must be odd in [3,21], got " +
                          std::to_string(step.kernel_size));
      }
      break;
    case StepKind::resize:
      if (step.scale <= 0.0 || step.scale > 4.0) throw ConfigError("resize scale out of (0,4]");
      break;
    case StepKind::gaussian_noise:
    case StepKind::speckle_noise:
      if (step.sigma < 0.0 || step.sigma > 255.0) {
        throw ConfigError("noise sigma out of [0,255] (8-bit scale)");
      }
      break;
    case StepKind::poisson_noise:
      if (!(step.noise_scale > 0.0)) throw ConfigError("poisson scale must be positive");
      break;
    case StepKind::jpeg:
      if (step.quality < 1 || step.quality > 100) {
        throw ConfigError("jpeg quality out of [1,100]");
      }
      break;
    case StepKind::final_downsample:
      if (step.scale_factor < 1) throw ConfigError("scale factor must be >= 1");
      break;
  }
}

const char* pipeline_family_name(PipelineFamily family) {
  return family == PipelineFamily::shuffled ? "shuffled" : "high-order";
}

PipelineFamily pipeline_family_from_name(const std::string& name) {
  if (name == "shuffled") return PipelineFamily::shuffled;
  if (name == "high-order") return PipelineFamily::high_order;
  throw DataError("unknown pipeline family: " + name);
}

void validate_recipe(const DegradationRecipe& recipe) {
  if (recipe.steps.empty()) throw ConfigError("recipe has no steps");
  int finals = 0;
  for (const auto& s : recipe.steps) {
    validate_step(s);
    if (s.kind == StepKind::final_downsample) ++finals;
  }
  if (finals != 1 || recipe.steps.back().kind != StepKind::final_downsample) {
    throw ConfigError("recipe must contain exactly one final-downsample step, as its last step");
  }
  if (recipe.steps.back().scale_factor != recipe.scale_factor) {
    throw ConfigError("final-downsample factor disagrees with recipe scale factor");
  }
}

void validate_config(const PipelineConfig& cfg) {
  const double psum = cfg.family_probs[0] + cfg.family_probs[1];
  if (cfg.family_probs[0] < 0.0 || cfg.family_probs[1] < 0.0 ||
      std::fabs(psum - 1.0) > 1e-9) {
    throw ConfigError("family probabilities must be nonnegative and sum to 1");
  }
  if (cfg.high_order_rounds < 1) throw ConfigError("high-order round count must be >= 1");
  if (cfg.scale_factor < 1) throw ConfigError("scale factor must be >= 1");
  auto check_range = [](double lo, double hi, const char* what) {
    if (!(lo <= hi)) throw ConfigError(std::string("empty range for ") + what);
  };
  check_range(cfg.blur_sigma_range[0], cfg.blur_sigma_range[1], "blur sigma");
  check_range(cfg.noise_sigma_range[0], cfg.noise_sigma_range[1], "noise sigma");
  check_range(cfg.poisson_scale_range[0], cfg.poisson_scale_range[1], "poisson scale");
  check_range(cfg.resize_scale_range[0], cfg.resize_scale_range[1], "resize scale");
  if (cfg.blur_sigma_range[0] <= 0.0 || cfg.blur_sigma_range[1] > 16.0) {
    throw ConfigError("blur sigma range outside (0,16]");
  }
  if (cfg.kernel_size_range[0] < 3 || cfg.kernel_size_range[1] > 21 ||
      cfg.kernel_size_range[0] > cfg.kernel_size_range[1] ||
      cfg.kernel_size_range[0] % 2 == 0 || cfg.kernel_size_range[1] % 2 == 0) {
    throw ConfigError("kernel size range must be odd values within [3,21]");
  }
  if (cfg.noise_sigma_range[0] < 0.0 || cfg.noise_sigma_range[1] > 255.0) {
    throw ConfigError("noise sigma range outside [0,255]");
  }
  if (cfg.poisson_scale_range[0] <= 0.0) throw ConfigError("poisson scale range must be positive");
  if (cfg.resize_scale_range[0] <= 0.0 || cfg.resize_scale_range[1] > 4.0) {
    throw ConfigError("resize scale range outside (0,4]");
  }
  if (cfg.jpeg_quality_range[0] < 1 || cfg.jpeg_quality_range[1] > 100 ||
      cfg.jpeg_quality_range[0] > cfg.jpeg_quality_range[1]) {
    throw ConfigError("jpeg quality range outside [1,100]");
  }
  if (cfg.gray_noise_probability < 0.0 || cfg.gray_noise_probability > 1.0 ||
      cfg.isotropic_probability < 0.0 || cfg.isotropic_probability > 1.0) {
    throw ConfigError("probabilities must lie in [0,1]");
  }
}

Image apply_step(const Image& image, const DegradationStep& step) {
  validate_step(step);
  switch (step.kind) {
    case StepKind::gaussian_blur:
      return apply_blur(image, step);
    case StepKind::resize:
      return resize_scale(image, step.scale, step.mode);
    case StepKind::gaussian_noise:
      return apply_gaussian_noise(image, step);
    case StepKind::poisson_noise:
      return apply_poisson_noise(image, step);
    case StepKind::speckle_noise:
      return apply_speckle_noise(image, step);
    case StepKind::jpeg:
      return apply_jpeg(image, step.quality);
    case StepKind::final_downsample:
      return resize(image, std::max(1, image.width / step.scale_factor),
                    std::max(1, image.height / step.scale_factor), ResizeMode::bicubic);
  }
  throw ConfigError("unreachable step kind");
}

Image apply_recipe(const Image& image, const DegradationRecipe& recipe) {
  validate_recipe(recipe);
  if (image.width % recipe.scale_factor != 0 || image.height % recipe.scale_factor != 0) {
    throw ConfigError("image dims must be divisible by the scale factor");
  }
  // The terminal downsample is anchored to the *input* dimensions so the
  // output is exactly dims / scale_factor whatever the intermediate resizes did.
  const int target_w = image.width / recipe.scale_factor;
  const int target_h = image.height / recipe.scale_factor;
  Image current = image;
  for (const auto& step : recipe.steps) {
    if (step.kind == StepKind::final_downsample) {
      current = resize(current, target_w, target_h, ResizeMode::bicubic);
    } else {
      current = apply_step(current, step);
    }
  }
  return current;
}

DegradationRecipe sample_recipe(SeededRng& rng, const PipelineConfig& cfg) {
  validate_config(cfg);
  DegradationRecipe recipe;
  recipe.scale_factor = cfg.scale_factor;
  recipe.family = rng.bernoulli(cfg.family_probs[0]) ? PipelineFamily::shuffled
                                                     : PipelineFamily::high_order;
  if (recipe.family == PipelineFamily::shuffled) {
    int order[4] = {0, 1, 2, 3};  // blur, resize, noise, jpeg
    for (int i = 3; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
    for (int stage : order) {
      switch (stage) {
        case 0: recipe.steps.push_back(sample_blur(rng, cfg)); break;
        case 1: recipe.steps.push_back(sample_resize(rng, cfg)); break;
        case 2: recipe.steps.push_back(sample_noise(rng, cfg)); break;
        case 3: recipe.steps.push_back(sample_jpeg(rng, cfg)); break;
      }
    }
  } else {
    for (int round = 0; round < cfg.high_order_rounds; ++round) {
      recipe.steps.push_back(sample_blur(rng, cfg));
      recipe.steps.push_back(sample_resize(rng, cfg));
      recipe.steps.push_back(sample_noise(rng, cfg));
      recipe.steps.push_back(sample_jpeg(rng, cfg));
    }
  }
  DegradationStep fin;
  fin.kind = StepKind::final_downsample;
  fin.scale_factor = cfg.scale_factor;
  recipe.steps.push_back(fin);
  return recipe;
}

namespace {

ordered_json step_to_json(const DegradationStep& s) {
  ordered_json j;
  j["kind"] = step_kind_name(s.kind);
  switch (s.kind) {
    case StepKind::gaussian_blur:
      j["sigma_x"] = s.sigma_x;
      j["sigma_y"] = s.sigma_y;
      j["angle"] = s.angle;
      j["kernel_size"] = s.kernel_size;
      break;
    case StepKind::resize:
      j["scale"] = s.scale;
      j["mode"] = resize_mode_name(s.mode);
      break;
    case StepKind::gaussian_noise:
    case StepKind::speckle_noise:
      j["sigma"] = s.sigma;
      j["gray"] = s.gray;
      j["noise_seed"] = s.noise_seed;
      break;
    case StepKind::poisson_noise:
      j["scale"] = s.noise_scale;
      j["gray"] = s.gray;
      j["noise_seed"] = s.noise_seed;
      break;
    case StepKind::jpeg:
      j["quality"] = s.quality;
      break;
    case StepKind::final_downsample:
      j["scale_factor"] = s.scale_factor;
      break;
  }
  return j;
}

DegradationStep step_from_json(const ordered_json& j) {
  DegradationStep s;
  s.kind = step_kind_from_name(j.at("kind").get<std::string>());
  switch (s.kind) {
    case StepKind::gaussian_blur:
      s.sigma_x = j.at("sigma_x").get<double>();
      s.sigma_y = j.at("sigma_y").get<double>();
      s.angle = j.at("angle").get<double>();
      s.kernel_size = j.at("kernel_size").get<int>();
      break;
    case StepKind::resize:
      s.scale = j.at("scale").get<double>();
      s.mode = resize_mode_from_name(j.at("mode").get<std::string>());
      break;
    case StepKind::gaussian_noise:
    case StepKind::speckle_noise:
      s.sigma = j.at("sigma").get<double>();
      s.gray = j.at("gray").get<bool>();
      s.noise_seed = j.at("noise_seed").get<std::uint64_t>();
      break;
    case StepKind::poisson_noise:
      s.noise_scale = j.at("scale").get<double>();
      s.gray = j.at("gray").get<bool>();
      s.noise_seed = j.at("noise_seed").get<std::uint64_t>();
      break;
    case StepKind::jpeg:
      s.quality = j.at("quality").get<int>();
      break;
    case StepKind::final_downsample:
      s.scale_factor = j.at("scale_factor").get<int>();
      break;
  }
  return s;
}

}  // namespace

std::string serialize_recipe(const DegradationRecipe& recipe) {
  ordered_json j;
  j["schema_version"] = 1;
  j["recipe_id"] = recipe.recipe_id;
  j["family"] = pipeline_family_name(recipe.family);
  j["scale_factor"] = recipe.scale_factor;
  j["source_seed"] = recipe.source_seed;
  j["steps"] = ordered_json::array();
  for (const auto& s : recipe.steps) j["steps"].push_back(step_to_json(s));
  return j.dump();
}

DegradationRecipe parse_recipe(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("recipe parse error at byte ") + std::to_string(e.byte) + ": " +
                    e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != 1) throw DataError("unsupported recipe schema version");
    DegradationRecipe r;
    r.recipe_id = j.at("recipe_id").get<std::string>();
    r.family = pipeline_family_from_name(j.at("family").get<std::string>());
    r.scale_factor = j.at("scale_factor").get<int>();
    r.source_seed = j.at("source_seed").get<std::uint64_t>();
    for (const auto& js : j.at("steps")) r.steps.push_back(step_from_json(js));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("recipe field error: ") + e.what());
  }
}

}  // namespace seal
