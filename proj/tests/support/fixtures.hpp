#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>

#include "seal/image.hpp"
#include "seal/resize.hpp"
#include "seal/rng.hpp"

namespace fixtures {

// Scoped temp directory; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("seal_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline seal::Image checkerboard(int w, int h, int cell, float lo = 0.0f, float hi = 1.0f) {
  seal::Image img = seal::Image::filled(w, h, lo, lo, lo);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (((x / cell) + (y / cell)) % 2 == 1) {
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = hi;
      }
    }
  }
  return img;
}

// Procedural stand-in for a photographic reference: smooth shading from
// upsampled value-noise octaves, plus solid shapes for hard edges, plus fine
// texture. Deterministic in the seed.
inline seal::Image natural_image(int w, int h, std::uint64_t seed) {
  seal::SeededRng rng(seed);

  auto noise_layer = [&](int grid) {
    seal::Image g = seal::Image::filled(grid, grid, 0, 0, 0);
    for (auto& v : g.data) v = static_cast<float>(rng.uniform());
    return seal::resize(g, w, h, seal::ResizeMode::bilinear);
  };

  seal::Image base = noise_layer(8);
  const seal::Image oct1 = noise_layer(24);
  const seal::Image oct2 = noise_layer(64);
  for (std::size_t i = 0; i < base.data.size(); ++i) {
    base.data[i] = 0.45f + 0.35f * (base.data[i] - 0.5f) + 0.30f * (oct1.data[i] - 0.5f) +
                   0.20f * (oct2.data[i] - 0.5f);
  }

  // solid shapes give hard edges
  const int shapes = 8 + (w * h) / 4096;
  for (int s = 0; s < shapes; ++s) {
    const float r = static_cast<float>(rng.uniform());
    const float g = static_cast<float>(rng.uniform());
    const float b = static_cast<float>(rng.uniform());
    const int cx = rng.uniform_int(0, w - 1);
    const int cy = rng.uniform_int(0, h - 1);
    const int half = rng.uniform_int(2, std::max(3, w / 10));
    const bool circle = rng.bernoulli(0.5);
    for (int y = std::max(0, cy - half); y <= std::min(h - 1, cy + half); ++y) {
      for (int x = std::max(0, cx - half); x <= std::min(w - 1, cx + half); ++x) {
        if (circle && (x - cx) * (x - cx) + (y - cy) * (y - cy) > half * half) continue;
        base.at(x, y, 0) = 0.2f * base.at(x, y, 0) + 0.8f * r;
        base.at(x, y, 1) = 0.2f * base.at(x, y, 1) + 0.8f * g;
        base.at(x, y, 2) = 0.2f * base.at(x, y, 2) + 0.8f * b;
      }
    }
  }

  // fine per-pixel texture so blur strength is visible in the histogram
  for (auto& v : base.data) {
    v += 0.06f * static_cast<float>(rng.uniform() - 0.5);
    v = std::clamp(v, 0.0f, 1.0f);
  }
  return base;
}

inline seal::Image impulse_image(int w, int h, int cx, int cy) {
  seal::Image img = seal::Image::filled(w, h, 0, 0, 0);
  for (int c = 0; c < 3; ++c) img.at(cx, cy, c) = 1.0f;
  return img;
}

}  // namespace fixtures
