#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "owf/harness.hpp"

#ifdef OWF_HAVE_PNG
#include <png.h>
#endif

namespace owf {

namespace {

void skip_space_and_comments(std::istream& in) {
  while (true) {
    const int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (ch != EOF && std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  int v = -1;
  if (!(in >> v) || v <= 0) {
    throw Error(ErrorCode::MalformedHeader, std::string("bad PGM ") + what);
  }
  return v;
}

bool has_png_signature(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  unsigned char sig[8] = {};
  f.read(reinterpret_cast<char*>(sig), 8);
  static constexpr unsigned char png[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return f.gcount() == 8 && std::equal(sig, sig + 8, png);
}

#ifdef OWF_HAVE_PNG
GrayImage read_png(const std::filesystem::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(ErrorCode::MalformedHeader, "cannot parse PNG: " + std::string(image.message));
  }
  if (image.format & (PNG_FORMAT_FLAG_COLOR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_LINEAR)) {
    png_image_free(&image);
    throw Error(ErrorCode::UnsupportedFormat, "only 8-bit grayscale PNG is supported");
  }
  image.format = PNG_FORMAT_GRAY;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoFailure, "PNG decode failed: " + std::string(image.message));
  }
  return GrayImage(static_cast<int>(image.width), static_cast<int>(image.height),
                   std::vector<double>(buf.begin(), buf.end()));
}
#endif

}  // namespace

bool png_supported() {
#ifdef OWF_HAVE_PNG
  return true;
#else
  return false;
#endif
}

std::uint8_t quantize(double v) {
  const double c = std::clamp(v, 0.0, 255.0);
  return static_cast<std::uint8_t>(std::round(c));  // std::round: half away from zero
}

GrayImage clamp_to_8bit(const GrayImage& img) {
  GrayImage out = img;
  for (double& v : out.values()) v = std::clamp(v, 0.0, 255.0);
  return out;
}

GrayImage read_pgm(std::istream& in) {
  char magic[2] = {};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P') {
    throw Error(ErrorCode::MalformedHeader, "not a PNM file");
  }
  if (magic[1] != '5') {
    throw Error(ErrorCode::UnsupportedFormat,
                std::string("only binary P5 graymaps are supported, got P") + magic[1]);
  }
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedFormat,
                "only maxval 255 is supported, got " + std::to_string(maxval));
  }
  const int sep = in.get();
  if (sep == EOF || !std::isspace(sep)) {
    throw Error(ErrorCode::MalformedHeader, "missing whitespace after maxval");
  }
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
    throw Error(ErrorCode::IoFailure, "truncated PGM pixel data");
  }
  return GrayImage(width, height, std::vector<double>(bytes.begin(), bytes.end()));
}

void write_pgm(const GrayImage& img, std::ostream& out) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<char> bytes;
  bytes.reserve(img.size());
  for (double v : img.values()) bytes.push_back(static_cast<char>(quantize(v)));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

GrayImage read_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
  }
  if (has_png_signature(path)) {
#ifdef OWF_HAVE_PNG
    return read_png(path);
#else
    throw Error(ErrorCode::UnsupportedFormat, "built without PNG support: " + path.string());
#endif
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_pgm(in);
}

void write_image(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  write_pgm(img, out);
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

}  // namespace owf
