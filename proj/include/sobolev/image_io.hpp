#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sobolev/error.hpp"
#include "sobolev/image.hpp"

namespace sobolev {

enum class PgmEncoding { binary, ascii };

struct SaveOptions {
  int bits = 8;  ///< 8 or 16
  PgmEncoding pgm_encoding = PgmEncoding::binary;
};

namespace detail {

// Truncating quantization of [0,1] onto [0, maxval]. The small offset keeps
// values that are already exact multiples of 1/maxval on their level.
inline std::uint32_t quantize(double v, std::uint32_t maxval) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  const double q = std::floor(clamped * static_cast<double>(maxval) + 1e-6);
  return static_cast<std::uint32_t>(std::min(q, static_cast<double>(maxval)));
}

inline std::uint32_t maxval_for_bits(int bits) {
  if (bits == 8) return 255;
  if (bits == 16) return 65535;
  throw std::invalid_argument("image bit depth must be 8 or 16");
}

inline std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Next whitespace-delimited header token, skipping '#' comments.
inline std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

inline std::size_t pgm_number(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw IoError(std::string("malformed PGM header: bad ") + what);
  }
  return static_cast<std::size_t>(std::stoull(tok));
}

inline Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5") throw IoError("unsupported PGM magic in " + path.string());
  const std::size_t width = pgm_number(in, "width");
  const std::size_t height = pgm_number(in, "height");
  const std::size_t maxval = pgm_number(in, "maxval");
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    throw IoError("malformed PGM header in " + path.string());
  }
  std::vector<double> data(width * height);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (magic == "P2") {
    for (double& v : data) v = static_cast<double>(pgm_number(in, "sample")) * scale;
  } else {
    const std::size_t bytes = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(width * height * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw IoError("truncated PGM data in " + path.string());
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::uint32_t sample = bytes == 1 ? raw[i] : (static_cast<std::uint32_t>(raw[2 * i]) << 8) | raw[2 * i + 1];
      data[i] = static_cast<double>(sample) * scale;
    }
  }
  return Image(width, height, std::move(data));
}

inline void write_pgm(const Image& img, const std::filesystem::path& path, const SaveOptions& opt) {
  const std::uint32_t maxval = maxval_for_bits(opt.bits);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const bool ascii = opt.pgm_encoding == PgmEncoding::ascii;
  out << (ascii ? "P2" : "P5") << '\n' << img.width() << ' ' << img.height() << '\n' << maxval << '\n';
  if (ascii) {
    for (std::size_t r = 0; r < img.height(); ++r) {
      for (std::size_t c = 0; c < img.width(); ++c) {
        out << quantize(img(r, c), maxval) << (c + 1 == img.width() ? '\n' : ' ');
      }
    }
  } else {
    std::vector<unsigned char> raw;
    raw.reserve(img.size() * (opt.bits / 8));
    for (double v : img.pixels()) {
      const std::uint32_t q = quantize(v, maxval);
      if (opt.bits == 16) raw.push_back(static_cast<unsigned char>(q >> 8));
      raw.push_back(static_cast<unsigned char>(q & 0xFF));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  }
  if (!out) throw IoError("failed writing " + path.string());
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReadHandles {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadHandles() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngWriteHandles {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteHandles() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

inline void silent_png_warning(png_structp, png_const_charp) {}

// All automatic objects below are constructed before setjmp, so the longjmp
// taken on a libpng error never skips a destructor.
inline Image read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());
  PngReadHandles h;
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  h.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, silent_png_warning);
  if (!h.png) throw IoError("libpng initialization failed");
  h.info = png_create_info_struct(h.png);
  if (!h.info) throw IoError("libpng initialization failed");
  if (setjmp(png_jmpbuf(h.png))) throw IoError("corrupt PNG file " + path.string());

  png_init_io(h.png, fp.get());
  png_read_info(h.png, h.info);
  const png_uint_32 width = png_get_image_width(h.png, h.info);
  const png_uint_32 height = png_get_image_height(h.png, h.info);
  const int color_type = png_get_color_type(h.png, h.info);
  int bit_depth = png_get_bit_depth(h.png, h.info);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    throw IoError("PNG " + path.string() + " is not single-channel grayscale");
  }
  if (bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(h.png);
    bit_depth = 8;
  }
  png_read_update_info(h.png, h.info);
  const std::size_t bytes = bit_depth == 16 ? 2 : 1;
  pixels.resize(static_cast<std::size_t>(width) * height * bytes);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + static_cast<std::size_t>(r) * width * bytes;
  png_read_image(h.png, rows.data());
  png_read_end(h.png, nullptr);

  const double scale = 1.0 / (bit_depth == 16 ? 65535.0 : 255.0);
  std::vector<double> data(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::uint32_t sample =
        bytes == 1 ? pixels[i] : (static_cast<std::uint32_t>(pixels[2 * i]) << 8) | pixels[2 * i + 1];
    data[i] = static_cast<double>(sample) * scale;
  }
  return Image(width, height, std::move(data));
}

inline void write_png(const Image& img, const std::filesystem::path& path, const SaveOptions& opt) {
  const std::uint32_t maxval = maxval_for_bits(opt.bits);
  const std::size_t bytes = opt.bits == 16 ? 2 : 1;
  std::vector<unsigned char> pixels(img.size() * bytes);
  for (std::size_t i = 0; i < img.size(); ++i) {
    const std::uint32_t q = quantize(img[i], maxval);
    if (bytes == 2) {
      pixels[2 * i] = static_cast<unsigned char>(q >> 8);
      pixels[2 * i + 1] = static_cast<unsigned char>(q & 0xFF);
    } else {
      pixels[i] = static_cast<unsigned char>(q);
    }
  }
  std::vector<png_bytep> rows(img.height());
  for (std::size_t r = 0; r < img.height(); ++r) rows[r] = pixels.data() + r * img.width() * bytes;

  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path.string());
  PngWriteHandles h;
  h.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, silent_png_warning);
  if (!h.png) throw IoError("libpng initialization failed");
  h.info = png_create_info_struct(h.png);
  if (!h.info) throw IoError("libpng initialization failed");
  if (setjmp(png_jmpbuf(h.png))) throw IoError("failed writing PNG " + path.string());

  png_init_io(h.png, fp.get());
  png_set_IHDR(h.png, h.info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()),
               opt.bits, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(h.png, h.info);
  png_write_image(h.png, rows.data());
  png_write_end(h.png, nullptr);
}

}  // namespace detail

/// Load a grayscale PGM (P2/P5, 8- or 16-bit) or PNG (gray, 1-16 bit) file.
/// Samples are mapped from [0, maxval] onto [0, 1]. Format is sniffed from
/// the file contents, not the extension.
inline Image load_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path.string());
  unsigned char sig[8] = {};
  probe.read(reinterpret_cast<char*>(sig), 8);
  const auto got = probe.gcount();
  probe.close();
  if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) return detail::read_png(path);
  if (got >= 2 && sig[0] == 'P' && (sig[1] == '2' || sig[1] == '5')) return detail::read_pgm(path);
  throw IoError("unsupported image format: " + path.string());
}

/// Save as PGM (.pgm/.pnm) or PNG (.png). Values are clamped to [0,1] and
/// quantized by truncation to the requested bit depth.
inline void save_image(const Image& img, const std::filesystem::path& path, const SaveOptions& opt = {}) {
  const std::string ext = detail::lower_extension(path);
  if (ext == ".pgm" || ext == ".pnm") {
    detail::write_pgm(img, path, opt);
  } else if (ext == ".png") {
    detail::write_png(img, path, opt);
  } else {
    throw IoError("unsupported output extension '" + ext + "' (use .pgm or .png)");
  }
}

}  // namespace sobolev
