#pragma once

#include <cstdint>
#include <vector>

namespace seal {

// The two pixel representations are separate types rather than a tagged field;
// the type is the representation tag. All processing happens on Image (reals
// in [0,1]); ImageU8 appears only at file boundaries, at simulated JPEG steps,
// and wherever a metric is defined on the 8-bit scale.

struct ImageU8 {
  int width = 0;
  int height = 0;
  static constexpr int channels = 3;  // RGB
  std::vector<std::uint8_t> data;     // row-major, interleaved

  std::size_t sample_count() const { return data.size(); }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

struct Image {
  int width = 0;
  int height = 0;
  static constexpr int channels = 3;
  std::vector<float> data;  // row-major, interleaved, values in [0,1]

  static Image filled(int w, int h, float r, float g, float b);

  std::size_t sample_count() const { return data.size(); }
  float at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// Round-to-nearest quantization; round-trips within 1/510 per sample.
ImageU8 to_u8(const Image& img);
Image to_real(const ImageU8& img);

inline std::uint8_t quantize_sample(float v) {
  const float x = v * 255.0f + 0.5f;
  if (x <= 0.0f) return 0;
  if (x >= 255.0f) return 255;
  return static_cast<std::uint8_t>(x);
}

// Centered w x h sub-image; offset = floor((dim - target) / 2).
Image crop_center(const Image& img, int w, int h);

// Crops both dimensions down to the nearest multiple of `factor`.
Image crop_to_multiple(const Image& img, int factor);

// Rec. 601 luma of an 8-bit pixel triple, on the 0..255 scale.
inline double luma601(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace seal
