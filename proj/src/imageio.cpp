#include "iqa/imageio.hpp"

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include "iqa/errors.hpp"

namespace iqa {

namespace {

unsigned char quantize(double v) {
  return static_cast<unsigned char>(std::lround(255.0 * clamp01(v)));
}

// --- PNM (P5 grayscale / P6 color, binary, maxval 255) ---

// Reads the next header token, skipping whitespace and # comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return tok;
  tok.push_back(static_cast<char>(c));
  while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
  return tok;
}

int pnm_int(std::istream& in, const std::string& path, const char* field) {
  std::string tok = pnm_token(in);
  if (tok.empty()) throw IoError(path + ": truncated header (" + field + ")");
  try {
    std::size_t pos = 0;
    int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(path + ": bad header value '" + tok + "' for " + field);
  }
}

ImageTensor load_pnm(std::istream& in, const std::string& path, int channels) {
  int width = pnm_int(in, path, "width");
  int height = pnm_int(in, path, "height");
  int maxval = pnm_int(in, path, "maxval");
  if (width <= 0 || height <= 0) throw IoError(path + ": non-positive dimensions");
  if (maxval != 255) throw IoError(path + ": only maxval 255 supported, got " + std::to_string(maxval));
  std::size_t n = static_cast<std::size_t>(width) * height * channels;
  std::vector<unsigned char> raw(n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw IoError(path + ": truncated pixel data");
  std::vector<std::vector<double>> planes(channels);
  for (auto& pl : planes) pl.resize(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < static_cast<std::size_t>(width) * height; ++i)
    for (int c = 0; c < channels; ++c) planes[c][i] = raw[i * channels + c] / 255.0;
  if (channels == 1) return ImageTensor(ImagePlane(height, width, std::move(planes[0])));
  return ImageTensor(ImagePlane(height, width, std::move(planes[0])),
                     ImagePlane(height, width, std::move(planes[1])),
                     ImagePlane(height, width, std::move(planes[2])));
}

// --- PNG (8-bit, via libpng) ---

struct PngReadCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

ImageTensor load_png(const std::string& path) {
  PngReadCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw IoError(path + ": cannot open for reading");
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError(path + ": png read init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError(path + ": png info init failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw IoError(path + ": png decode failed");

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);
  png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  int color_type = png_get_color_type(ctx.png, ctx.info);
  if (bit_depth == 16) throw IoError(path + ": 16-bit PNG not supported");

  // Normalize every variant to 8-bit gray or RGB, alpha stripped.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
  png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  int channels = png_get_channels(ctx.png, ctx.info);
  if (channels != 1 && channels != 3) throw IoError(path + ": unsupported PNG channel layout");
  std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
  std::vector<unsigned char> raw(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 i = 0; i < height; ++i) rows[i] = raw.data() + i * rowbytes;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  int h = static_cast<int>(height), w = static_cast<int>(width);
  std::vector<std::vector<double>> planes(channels);
  for (auto& pl : planes) pl.resize(static_cast<std::size_t>(h) * w);
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      for (int c = 0; c < channels; ++c)
        planes[c][static_cast<std::size_t>(i) * w + j] =
            raw[i * rowbytes + static_cast<std::size_t>(j) * channels + c] / 255.0;
  if (channels == 1) return ImageTensor(ImagePlane(h, w, std::move(planes[0])));
  return ImageTensor(ImagePlane(h, w, std::move(planes[0])), ImagePlane(h, w, std::move(planes[1])),
                     ImagePlane(h, w, std::move(planes[2])));
}

struct PngWriteCtx {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngWriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

void save_png(const std::string& path, const ImageTensor& img) {
  PngWriteCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw IoError(path + ": cannot open for writing");
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ctx.png) throw IoError(path + ": png write init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError(path + ": png info init failed");
  if (setjmp(png_jmpbuf(ctx.png))) throw IoError(path + ": png encode failed");

  int channels = img.channels();
  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, img.width(), img.height(), 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  std::size_t rowbytes = static_cast<std::size_t>(img.width()) * channels;
  std::vector<unsigned char> row(rowbytes);
  for (int i = 0; i < img.height(); ++i) {
    for (int j = 0; j < img.width(); ++j)
      for (int c = 0; c < channels; ++c)
        row[static_cast<std::size_t>(j) * channels + c] = quantize(img.plane(c).at(i, j));
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, nullptr);
}

void save_pnm(const std::string& path, const ImageTensor& img, int channels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << (channels == 1 ? "P5" : "P6") << "\n"
      << img.width() << " " << img.height() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(img.width()) * channels);
  for (int i = 0; i < img.height(); ++i) {
    for (int j = 0; j < img.width(); ++j)
      for (int c = 0; c < channels; ++c)
        row[static_cast<std::size_t>(j) * channels + c] = quantize(img.plane(c).at(i, j));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError(path + ": write failed");
}

bool has_suffix(const std::string& s, const char* suf) {
  std::size_t n = std::strlen(suf);
  if (s.size() < n) return false;
  std::string tail = s.substr(s.size() - n);
  for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return tail == suf;
}

}  // namespace

ImageTensor load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  unsigned char magic[8] = {0};
  in.read(reinterpret_cast<char*>(magic), 8);
  if (in.gcount() < 2) throw IoError(path + ": file too short");
  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  if (in.gcount() == 8 && std::memcmp(magic, png_sig, 8) == 0) {
    in.close();
    return load_png(path);
  }
  if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
    in.clear();
    in.seekg(2);
    return load_pnm(in, path, magic[1] == '5' ? 1 : 3);
  }
  throw IoError(path + ": unrecognized image format (want PGM, PPM, or PNG)");
}

void save_image(const std::string& path, const ImageTensor& img) {
  if (img.channels() != 1 && img.channels() != 3)
    throw InvalidInput("save_image: expected 1 or 3 channels");
  if (has_suffix(path, ".png")) {
    save_png(path, img);
  } else if (has_suffix(path, ".pgm")) {
    if (img.channels() == 1)
      save_pnm(path, img, 1);
    else
      save_pnm(path, ImageTensor(to_grayscale(img)), 1);
  } else if (has_suffix(path, ".ppm")) {
    if (img.channels() == 3) {
      save_pnm(path, img, 3);
    } else {
      const ImagePlane& g = img.plane(0);
      save_pnm(path, ImageTensor(g, g, g), 3);
    }
  } else {
    throw IoError(path + ": unsupported output extension (want .pgm, .ppm, or .png)");
  }
}

void save_image(const std::string& path, const ImagePlane& plane) {
  save_image(path, ImageTensor(plane));
}

}  // namespace iqa
