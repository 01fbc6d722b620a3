#include "image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "error.hpp"

namespace ka {

namespace {

// next whitespace-separated PGM header token, skipping comments
std::string pgm_token(std::istream& in) {
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

int pgm_int(std::istream& in, const std::string& path) {
  std::string t = pgm_token(in);
  try {
    std::size_t used = 0;
    int v = std::stoi(t, &used);
    if (used == t.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::parse, "bad PGM header field '" + t + "' in " + path);
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorCode::io, "cannot open " + path);
  std::string magic = pgm_token(in);
  require(magic == "P2" || magic == "P5", ErrorCode::parse, path + " is not a PGM file");
  GrayImage img;
  img.width = pgm_int(in, path);
  img.height = pgm_int(in, path);
  int maxval = pgm_int(in, path);
  require(img.width > 0 && img.height > 0 && maxval > 0 && maxval < 65536, ErrorCode::parse,
          "bad PGM dimensions in " + path);
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  img.pixels.resize(n);
  auto scale = [maxval](int v) { return static_cast<unsigned char>(std::min(255, v * 255 / maxval)); };
  if (magic == "P2") {
    for (std::size_t q = 0; q < n; ++q) img.pixels[q] = scale(pgm_int(in, path));
  } else {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    require(static_cast<std::size_t>(in.gcount()) == raw.size(), ErrorCode::parse, "truncated PGM data in " + path);
    for (std::size_t q = 0; q < n; ++q)
      img.pixels[q] = scale(bytes == 1 ? raw[q] : (raw[2 * q] << 8 | raw[2 * q + 1]));
  }
  return img;
}

GrayImage read_png(const std::string& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    fail(ErrorCode::io, "cannot read PNG " + path + ": " + image.message);
  image.format = PNG_FORMAT_GRAY;
  GrayImage img;
  img.width = static_cast<int>(image.width);
  img.height = static_cast<int>(image.height);
  img.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    fail(ErrorCode::parse, "cannot decode PNG " + path + ": " + msg);
  }
  return img;
}

GrayImage read_image(const std::string& path) {
  auto ends_with = [&](const std::string& s) {
    if (path.size() < s.size()) return false;
    std::string tail = path.substr(path.size() - s.size());
    for (auto& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return tail == s;
  };
  return ends_with(".png") ? read_png(path) : read_pgm(path);
}

void write_pgm(const std::string& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrorCode::io, "cannot write " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  require(bool(out), ErrorCode::io, "write failed for " + path);
}

GridDomain mask_domain(const GrayImage& img, double lo1, double lo2, double h, int threshold) {
  require(h > 0, ErrorCode::invalid_argument, "spacing must be positive");
  require(img.width > 0 && img.height > 0, ErrorCode::invalid_argument, "empty mask");
  GridDomain g;
  g.dim = 2;
  g.h = h;
  g.n = {img.width, img.height, 1};
  g.lo = {lo1, lo2, 0};
  g.occ.assign(g.size(), 0);
  for (int row = 0; row < img.height; ++row)
    for (int col = 0; col < img.width; ++col)
      g.occ[g.index(col, img.height - 1 - row)] =
          img.pixels[static_cast<std::size_t>(row) * img.width + col] >= threshold ? 1 : 0;
  g.source = "mask";
  return g;
}

GrayImage overlay(const GridDomain& g, const std::vector<std::size_t>& highlight, int slice) {
  require(g.dim == 2, ErrorCode::invalid_argument, "overlays are drawn for 2D domains");
  GrayImage img;
  img.width = g.n[0];
  img.height = g.n[1];
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  auto px = [&](int i, int j) -> unsigned char& {
    return img.pixels[static_cast<std::size_t>(img.height - 1 - j) * img.width + i];
  };
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j) {
      bool in = g.in(i, j);
      px(i, j) = i == slice ? (in ? 160 : 90) : (in ? 200 : 40);
    }
  for (auto q : highlight) {
    int i = static_cast<int>(q / g.n[1]), j = static_cast<int>(q % g.n[1]);
    px(i, j) = 255;
  }
  return img;
}

}  // namespace ka
