#pragma once

#include <string>
#include <vector>

#include "domains.hpp"

namespace ka {

// Grayscale raster, row 0 at the top.
struct GrayImage {
  int width = 0, height = 0;
  std::vector<unsigned char> pixels;
};

GrayImage read_pgm(const std::string& path);
GrayImage read_png(const std::string& path);
// by extension: .png, otherwise PGM
GrayImage read_image(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);

// Pixel (col, row) becomes the cell x1 = lo1 + col h, x2 = lo2 + (height-1-row) h;
// pixels with gray >= threshold are inside.
GridDomain mask_domain(const GrayImage& img, double lo1, double lo2, double h, int threshold = 128);

// 2D domain as an image: X 200, complement 40, highlighted cells 255.
GrayImage overlay(const GridDomain& g, const std::vector<std::size_t>& highlight = {}, int slice_axis_index = -1);

}  // namespace ka
