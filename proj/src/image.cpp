#include "seal/image.hpp"

#include "seal/errors.hpp"

namespace seal {

Image Image::filled(int w, int h, float r, float g, float b) {
  Image img;
  img.width = w;
  img.height = h;
  img.data.resize(static_cast<std::size_t>(w) * h * channels);
  for (std::size_t i = 0; i < img.data.size(); i += channels) {
    img.data[i] = r;
    img.data[i + 1] = g;
    img.data[i + 2] = b;
  }
  return img;
}

ImageU8 to_u8(const Image& img) {
  ImageU8 out;
  out.width = img.width;
  out.height = img.height;
  out.data.resize(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = quantize_sample(img.data[i]);
  return out;
}

Image to_real(const ImageU8& img) {
  Image out;
  out.width = img.width;
  out.height = img.height;
  out.data.resize(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i] / 255.0f;
  return out;
}

Image crop_center(const Image& img, int w, int h) {
  if (w <= 0 || h <= 0 || w > img.width || h > img.height) {
    throw ConfigError("crop_center: target " + std::to_string(w) + "x" + std::to_string(h) +
                      " exceeds image " + std::to_string(img.width) + "x" +
                      std::to_string(img.height));
  }
  const int ox = (img.width - w) / 2;
  const int oy = (img.height - h) / 2;
  Image out;
  out.width = w;
  out.height = h;
  out.data.resize(static_cast<std::size_t>(w) * h * Image::channels);
  for (int y = 0; y < h; ++y) {
    const float* src = &img.data[(static_cast<std::size_t>(y + oy) * img.width + ox) *
                                 Image::channels];
    float* dst = &out.data[static_cast<std::size_t>(y) * w * Image::channels];
    std::copy(src, src + static_cast<std::size_t>(w) * Image::channels, dst);
  }
  return out;
}

Image crop_to_multiple(const Image& img, int factor) {
  const int w = (img.width / factor) * factor;
  const int h = (img.height / factor) * factor;
  if (w == 0 || h == 0) {
    throw ConfigError("crop_to_multiple: image smaller than factor " + std::to_string(factor));
  }
  if (w == img.width && h == img.height) return img;
  return crop_center(img, w, h);
}

}  // namespace seal
