#include "seal/resize.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "seal/errors.hpp"

namespace seal {

namespace {

double cubic_keys(double t) {
  constexpr double a = -0.5;
  t = std::fabs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return (((t - 5.0) * t + 8.0) * t - 4.0) * a;
  return 0.0;
}

double tent(double t) {
  t = std::fabs(t);
  return t < 1.0 ? 1.0 - t : 0.0;
}

struct Taps {
  int first = 0;                // first source index (clamped contributions folded in)
  std::vector<double> weights;  // normalized to sum 1
};

// Precomputes, for every output coordinate, the contributing source indices
// and weights along one axis. Pixel-center mapping: src = (dst + 0.5)/s - 0.5.
std::vector<Taps> make_taps(int src_n, int dst_n, ResizeMode mode) {
  const double scale = static_cast<double>(dst_n) / src_n;
  double base_support = 1.0;
  double (*kernel)(double) = tent;
  bool antialias = false;
  if (mode == ResizeMode::bicubic) {
    base_support = 2.0;
    kernel = cubic_keys;
    antialias = scale < 1.0;
  }
  const double kscale = antialias ? scale : 1.0;
  const double radius = base_support / kscale;

  std::vector<Taps> taps(dst_n);
  for (int i = 0; i < dst_n; ++i) {
    const double center = (i + 0.5) / scale - 0.5;
    const int lo = static_cast<int>(std::ceil(center - radius));
    const int hi = static_cast<int>(std::floor(center + radius));
    const int clo = std::max(lo, 0);
    const int chi = std::min(hi, src_n - 1);
    Taps& t = taps[i];
    t.first = clo;
    t.weights.assign(static_cast<std::size_t>(chi - clo + 1), 0.0);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) {
      const double w = kernel((center - j) * kscale);
      const int cj = std::min(std::max(j, 0), src_n - 1);  // replicate edges
      t.weights[cj - clo] += w;
      sum += w;
    }
    if (sum != 0.0) {
      for (double& w : t.weights) w /= sum;
    }
  }
  return taps;
}

std::vector<Taps> make_area_taps(int src_n, int dst_n) {
  const double inv_scale = static_cast<double>(src_n) / dst_n;
  std::vector<Taps> taps(dst_n);
  for (int i = 0; i < dst_n; ++i) {
    const double lo = i * inv_scale;
    const double hi = (i + 1) * inv_scale;
    const int jlo = static_cast<int>(std::floor(lo));
    const int jhi = std::min(static_cast<int>(std::ceil(hi)) - 1, src_n - 1);
    Taps& t = taps[i];
    t.first = jlo;
    t.weights.assign(static_cast<std::size_t>(jhi - jlo + 1), 0.0);
    double sum = 0.0;
    for (int j = jlo; j <= jhi; ++j) {
      const double overlap = std::min<double>(j + 1, hi) - std::max<double>(j, lo);
      if (overlap > 0.0) {
        t.weights[j - jlo] = overlap;
        sum += overlap;
      }
    }
    for (double& w : t.weights) w /= sum;
  }
  return taps;
}

// Horizontal pass: width changes, height fixed.
Image apply_taps_h(const Image& src, const std::vector<Taps>& taps) {
  Image out;
  out.width = static_cast<int>(taps.size());
  out.height = src.height;
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * Image::channels);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const Taps& t = taps[x];
      for (int c = 0; c < Image::channels; ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.weights.size(); ++k) {
          acc += t.weights[k] * src.at(t.first + static_cast<int>(k), y, c);
        }
        out.at(x, y, c) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Image apply_taps_v(const Image& src, const std::vector<Taps>& taps) {
  Image out;
  out.width = src.width;
  out.height = static_cast<int>(taps.size());
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * Image::channels);
  for (int y = 0; y < out.height; ++y) {
    const Taps& t = taps[y];
    for (int x = 0; x < src.width; ++x) {
      for (int c = 0; c < Image::channels; ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.weights.size(); ++k) {
          acc += t.weights[k] * src.at(x, t.first + static_cast<int>(k), c);
        }
        out.at(x, y, c) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Image resize_nearest(const Image& src, int out_w, int out_h) {
  Image out;
  out.width = out_w;
  out.height = out_h;
  out.data.resize(static_cast<std::size_t>(out_w) * out_h * Image::channels);
  const double sx = static_cast<double>(src.width) / out_w;
  const double sy = static_cast<double>(src.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    const int src_y = std::min(src.height - 1, static_cast<int>((y + 0.5) * sy));
    for (int x = 0; x < out_w; ++x) {
      const int src_x = std::min(src.width - 1, static_cast<int>((x + 0.5) * sx));
      for (int c = 0; c < Image::channels; ++c) out.at(x, y, c) = src.at(src_x, src_y, c);
    }
  }
  return out;
}

}  // namespace

const char* resize_mode_name(ResizeMode mode) {
  switch (mode) {
    case ResizeMode::area: return "area";
    case ResizeMode::bilinear: return "bilinear";
    case ResizeMode::bicubic: return "bicubic";
    case ResizeMode::nearest: return "nearest";
  }
  return "?";
}

ResizeMode resize_mode_from_name(const std::string& name) {
  if (name == "area") return ResizeMode::area;
  if (name == "bilinear") return ResizeMode::bilinear;
  if (name == "bicubic") return ResizeMode::bicubic;
  if (name == "nearest") return ResizeMode::nearest;
  throw DataError("unknown resize mode: " + name);
}

Image resize(const Image& img, int out_w, int out_h, ResizeMode mode) {
  if (out_w < 1 || out_h < 1) {
    throw ConfigError("resize: target below 1x1 (" + std::to_string(out_w) + "x" +
                      std::to_string(out_h) + ")");
  }
  if (img.width < 1 || img.height < 1) throw ConfigError("resize: empty source image");
  if (out_w == img.width && out_h == img.height && mode != ResizeMode::nearest) {
    // taps reduce to identity weights; skip the passes entirely
    return img;
  }
  if (mode == ResizeMode::nearest) return resize_nearest(img, out_w, out_h);
  if (mode == ResizeMode::area) {
    return apply_taps_v(apply_taps_h(img, make_area_taps(img.width, out_w)),
                        make_area_taps(img.height, out_h));
  }
  return apply_taps_v(apply_taps_h(img, make_taps(img.width, out_w, mode)),
                      make_taps(img.height, out_h, mode));
}

Image resize_scale(const Image& img, double scale, ResizeMode mode) {
  const int w = static_cast<int>(std::lround(img.width * scale));
  const int h = static_cast<int>(std::lround(img.height * scale));
  return resize(img, w, h, mode);
}

}  // namespace seal
