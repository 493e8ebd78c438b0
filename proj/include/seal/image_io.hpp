#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "seal/image.hpp"

namespace seal {

// Decodes PNG, BMP (24-bit uncompressed), or JPEG by file signature.
// Grayscale/palette/alpha inputs are expanded to plain RGB.
Image load_image(const std::filesystem::path& path);

// PNG is lossless and byte-deterministic for a given input.
void save_png(const Image& img, const std::filesystem::path& path);
void save_bmp(const Image& img, const std::filesystem::path& path);
void save_jpeg(const Image& img, const std::filesystem::path& path, int quality);

enum class ImageFormat { png, bmp, jpeg };
void save_image(const Image& img, const std::filesystem::path& path, ImageFormat format,
                int jpeg_quality = 90);

// In-memory JPEG round trip used by the jpeg degradation step.
std::vector<std::uint8_t> encode_jpeg(const ImageU8& img, int quality);
ImageU8 decode_jpeg(const std::uint8_t* bytes, std::size_t size);

std::vector<std::uint8_t> encode_png(const ImageU8& img);

}  // namespace seal
