#include "seal/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "seal/errors.hpp"

namespace seal {

namespace {

// ---------------------------------------------------------------- PNG ------

void png_warning_sink(png_structp, png_const_charp) {}

struct PngReadCtx {
  const std::uint8_t* bytes;
  std::size_t size;
  std::size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
  auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
  if (ctx->pos + n > ctx->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, ctx->bytes + ctx->pos, n);
  ctx->pos += n;
}

// libpng reports errors via longjmp; the jump target converts to an exception
// once control is back in this frame.
ImageU8 decode_png_bytes(const std::uint8_t* bytes, std::size_t size) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_sink);
  if (!png) throw IoError("png: failed to create read struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png: failed to create info struct");
  }

  PngReadCtx ctx{bytes, size, 0};
  ImageU8 out;
  std::vector<png_bytep> rows;
  bool bad_channels = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("png: corrupt or truncated stream");
  }

  png_set_read_fn(png, &ctx, png_mem_read);
  png_read_info(png, info);

  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  bad_channels = png_get_channels(png, info) != 3;
  if (!bad_channels) {
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    rows.resize(out.height);
    for (int y = 0; y < out.height; ++y) {
      rows[y] = out.data.data() + static_cast<std::size_t>(y) * out.width * 3;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (bad_channels) throw DataError("png: unexpected channel count after expansion");
  return out;
}

void png_mem_write(png_structp png, png_bytep data, png_size_t n) {
  auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  buf->insert(buf->end(), data, data + n);
}
void png_mem_flush(png_structp) {}

// ---------------------------------------------------------------- JPEG -----

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_thrower(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, mgr->message);
  std::longjmp(mgr->jump, 1);
}

// ---------------------------------------------------------------- BMP ------

std::uint32_t rd_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void wr_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
  v.push_back(x & 0xFF);
  v.push_back((x >> 8) & 0xFF);
}
void wr_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  v.push_back(x & 0xFF);
  v.push_back((x >> 8) & 0xFF);
  v.push_back((x >> 16) & 0xFF);
  v.push_back((x >> 24) & 0xFF);
}

ImageU8 decode_bmp_bytes(const std::uint8_t* b, std::size_t size) {
  if (size < 54) throw DataError("bmp: header truncated");
  const std::uint32_t data_offset = rd_u32(b + 10);
  const std::uint32_t header_size = rd_u32(b + 14);
  if (header_size < 40) throw DataError("bmp: unsupported header");
  const std::int32_t width = static_cast<std::int32_t>(rd_u32(b + 18));
  const std::int32_t height_raw = static_cast<std::int32_t>(rd_u32(b + 22));
  const std::uint16_t bpp = static_cast<std::uint16_t>(b[28] | (b[29] << 8));
  const std::uint32_t compression = rd_u32(b + 30);
  if (bpp != 24 || compression != 0) throw DataError("bmp: only 24-bit uncompressed supported");
  if (width <= 0 || height_raw == 0) throw DataError("bmp: bad dimensions");

  const bool bottom_up = height_raw > 0;
  const int height = bottom_up ? height_raw : -height_raw;
  const std::size_t row_stride = (static_cast<std::size_t>(width) * 3 + 3) & ~std::size_t{3};
  if (data_offset + row_stride * height > size) throw DataError("bmp: pixel data truncated");

  ImageU8 out;
  out.width = width;
  out.height = height;
  out.data.resize(static_cast<std::size_t>(width) * height * 3);
  for (int y = 0; y < height; ++y) {
    const int src_y = bottom_up ? (height - 1 - y) : y;
    const std::uint8_t* row = b + data_offset + row_stride * src_y;
    for (int x = 0; x < width; ++x) {
      // BMP stores BGR
      out.data[(static_cast<std::size_t>(y) * width + x) * 3 + 0] = row[x * 3 + 2];
      out.data[(static_cast<std::size_t>(y) * width + x) * 3 + 1] = row[x * 3 + 1];
      out.data[(static_cast<std::size_t>(y) * width + x) * 3 + 2] = row[x * 3 + 0];
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_bmp_bytes(const ImageU8& img) {
  const std::size_t row_stride = (static_cast<std::size_t>(img.width) * 3 + 3) & ~std::size_t{3};
  const std::uint32_t pixel_bytes = static_cast<std::uint32_t>(row_stride * img.height);
  std::vector<std::uint8_t> out;
  out.reserve(54 + pixel_bytes);
  out.push_back('B');
  out.push_back('M');
  wr_u32(out, 54 + pixel_bytes);
  wr_u32(out, 0);
  wr_u32(out, 54);
  wr_u32(out, 40);
  wr_u32(out, static_cast<std::uint32_t>(img.width));
  wr_u32(out, static_cast<std::uint32_t>(img.height));
  wr_u16(out, 1);
  wr_u16(out, 24);
  wr_u32(out, 0);
  wr_u32(out, pixel_bytes);
  wr_u32(out, 2835);  // 72 dpi
  wr_u32(out, 2835);
  wr_u32(out, 0);
  wr_u32(out, 0);
  for (int y = img.height - 1; y >= 0; --y) {
    std::size_t row_start = out.size();
    for (int x = 0; x < img.width; ++x) {
      out.push_back(img.at(x, y, 2));
      out.push_back(img.at(x, y, 1));
      out.push_back(img.at(x, y, 0));
    }
    while (out.size() - row_start < row_stride) out.push_back(0);
  }
  return out;
}

// ---------------------------------------------------------------- files ----

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::uint8_t* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const ImageU8& img, int quality) {
  if (quality < 1 || quality > 100) {
    throw ConfigError("jpeg quality must be in [1,100], got " + std::to_string(quality));
  }
  jpeg_compress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_thrower;

  unsigned char* buf = nullptr;
  unsigned long buf_size = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    if (buf) free(buf);
    throw DataError(std::string("jpeg encode: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buf, &buf_size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width);
  cinfo.image_height = static_cast<JDIMENSION>(img.height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    const JSAMPLE* row = img.data.data() + static_cast<std::size_t>(cinfo.next_scanline) *
                                               img.width * 3;
    JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<std::uint8_t> out(buf, buf + buf_size);
  free(buf);
  return out;
}

ImageU8 decode_jpeg(const std::uint8_t* bytes, std::size_t size) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_thrower;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw DataError(std::string("jpeg decode: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes, static_cast<unsigned long>(size));
  if (jpeg_read_header(&cinfo, TRUE) != JPEG_HEADER_OK) {
    jpeg_destroy_decompress(&cinfo);
    throw DataError("jpeg decode: bad header");
  }
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  ImageU8 out;
  out.width = static_cast<int>(cinfo.output_width);
  out.height = static_cast<int>(cinfo.output_height);
  out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.data.data() + static_cast<std::size_t>(cinfo.output_scanline) *
                                         out.width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return out;
}

std::vector<std::uint8_t> encode_png(const ImageU8& img) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warning_sink);
  if (!png) throw IoError("png: failed to create write struct");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png: failed to create info struct");
  }
  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("png: encode failed");
  }
  png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(img.data.data() +
                                             static_cast<std::size_t>(y) * img.width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  const auto bytes = read_file(path);
  if (bytes.size() < 4) throw DataError("file too short to decode: " + path.string());

  ImageU8 raw;
  if (bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' && bytes[3] == 'G') {
    raw = decode_png_bytes(bytes.data(), bytes.size());
  } else if (bytes[0] == 0xFF && bytes[1] == 0xD8) {
    raw = decode_jpeg(bytes.data(), bytes.size());
  } else if (bytes[0] == 'B' && bytes[1] == 'M') {
    raw = decode_bmp_bytes(bytes.data(), bytes.size());
  } else {
    throw DataError("unsupported image format: " + path.string());
  }
  return to_real(raw);
}

void save_png(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_png(to_u8(img));
  write_file(path, bytes.data(), bytes.size());
}

void save_bmp(const Image& img, const std::filesystem::path& path) {
  const auto bytes = encode_bmp_bytes(to_u8(img));
  write_file(path, bytes.data(), bytes.size());
}

void save_jpeg(const Image& img, const std::filesystem::path& path, int quality) {
  const auto bytes = encode_jpeg(to_u8(img), quality);
  write_file(path, bytes.data(), bytes.size());
}

void save_image(const Image& img, const std::filesystem::path& path, ImageFormat format,
                int jpeg_quality) {
  switch (format) {
    case ImageFormat::png: save_png(img, path); break;
    case ImageFormat::bmp: save_bmp(img, path); break;
    case ImageFormat::jpeg: save_jpeg(img, path, jpeg_quality); break;
  }
}

}  // namespace seal
