#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ssc/latent.hpp"

namespace ssc {

using Rgb = Eigen::Vector3d;

enum class BoxRole { text, figure };

/// Axis-aligned box in normalized page coordinates, top-left origin.
struct LayoutBox {
  BoxRole role = BoxRole::text;
  double x = 0, y = 0, w = 0, h = 0;
  Rgb fill = Rgb::Zero();
};

struct LayoutPage {
  double width_ratio = 1.0;
  double height_ratio = 1.0;
  std::vector<LayoutBox> boxes;
};

struct LayoutDocument {
  std::string title;
  std::vector<LayoutPage> pages;
};

/// Parses and validates a layout document. Syntax problems raise ParseError
/// with line and column; schema or range problems raise ValidationError
/// naming the page and box.
LayoutDocument parse_layout(std::string_view text);
LayoutDocument load_layout(const std::filesystem::path &path);
std::string serialize_layout(const LayoutDocument &doc);

/// Throws ValidationError on the first violated invariant.
void validate_layout(const LayoutDocument &doc);

struct RasterOptions {
  bool include_text = true;
  bool include_figures = true;
};

/// Token (r, c) covers [c/gw, (c+1)/gw) x [r/gh, (r+1)/gh) and has index
/// r * gw + c. A token is foreground iff its cell has nonzero intersection
/// area with any included box. Weight is 1 when one box contains the cell,
/// boundary_weight when it is only partially covered, 0 otherwise.
ForegroundMask rasterize_mask(const LayoutPage &page, int grid_h, int grid_w,
                              double boundary_weight, const RasterOptions &opts = {});

/// Seeded synthetic document on a token grid. Text box edges fall inside
/// token cells, a title band and a few paragraph blocks per page, and a
/// figure on some pages. Page aspects alternate between A4 and 16:9.
LayoutDocument synthetic_document(int pages, int grid_h, int grid_w, std::uint64_t seed);

}  // namespace ssc
