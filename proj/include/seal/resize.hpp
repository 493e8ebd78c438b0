#pragma once

#include <string>

#include "seal/image.hpp"

namespace seal {

// area     — exact box average over the fractional source footprint
// bilinear — tent kernel, no antialiasing (aliases on downscale by design)
// bicubic  — Keys kernel (a = -0.5), kernel width scaled on downscale
// nearest  — pixel-center snap; used only by the reference upscalers
enum class ResizeMode { area, bilinear, bicubic, nearest };

const char* resize_mode_name(ResizeMode mode);
ResizeMode resize_mode_from_name(const std::string& name);

Image resize(const Image& img, int out_w, int out_h, ResizeMode mode);

// Scales both dimensions by `scale`, rounding to the nearest pixel count.
Image resize_scale(const Image& img, double scale, ResizeMode mode);

}  // namespace seal
