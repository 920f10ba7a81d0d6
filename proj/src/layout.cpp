#include "ssc/layout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssc/common.hpp"
#include "ssc/rng.hpp"

namespace ssc {
namespace {

using nlohmann::json;

std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string box_name(std::size_t page, std::size_t box) {
  return "page " + std::to_string(page) + " box " + std::to_string(box);
}

double number_field(const json &j, const char *key, const std::string &where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ValidationError(where + ": missing numeric field '" + key + "'");
  return j.at(key).get<double>();
}

Rgb color_field(const json &j, const std::string &where) {
  const auto &c = j.at("fill");
  if (!c.is_array() || c.size() != 3)
    throw ValidationError(where + ": fill must be [r, g, b]");
  Rgb out;
  for (int i = 0; i < 3; ++i) {
    if (!c[std::size_t(i)].is_number())
      throw ValidationError(where + ": fill components must be numbers");
    out(i) = c[std::size_t(i)].get<double>();
  }
  return out;
}

}  // namespace

void validate_layout(const LayoutDocument &doc) {
  if (doc.pages.empty()) throw ValidationError("layout has no pages");
  for (std::size_t p = 0; p < doc.pages.size(); ++p) {
    const auto &page = doc.pages[p];
    if (!(page.width_ratio > 0.0) || !(page.height_ratio > 0.0))
      throw ValidationError("page " + std::to_string(p) + ": aspect ratios must be positive");
    for (std::size_t i = 0; i < page.boxes.size(); ++i) {
      const auto &b = page.boxes[i];
      const auto where = box_name(p, i);
      if (!(b.w > 0.0) || !(b.h > 0.0))
        throw ValidationError(where + ": width and height must be positive");
      if (!(b.x >= 0.0) || !(b.y >= 0.0))
        throw ValidationError(where + ": origin outside the page");
      if (!(b.x + b.w <= 1.0))
        throw ValidationError(where + ": x+w = " + std::to_string(b.x + b.w) + " exceeds 1");
      if (!(b.y + b.h <= 1.0))
        throw ValidationError(where + ": y+h = " + std::to_string(b.y + b.h) + " exceeds 1");
      if (!((b.fill.array() >= 0.0).all() && (b.fill.array() <= 1.0).all()))
        throw ValidationError(where + ": fill components must lie in [0, 1]");
    }
  }
}

LayoutDocument parse_layout(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw ParseError("layout: malformed JSON at " + locate(text, e.byte == 0 ? 0 : e.byte - 1) +
                     ": " + e.what());
  }
  if (!root.is_object()) throw ValidationError("layout: top level must be an object");

  LayoutDocument doc;
  if (root.contains("title")) {
    if (!root.at("title").is_string()) throw ValidationError("layout: title must be a string");
    doc.title = root.at("title").get<std::string>();
  }
  if (!root.contains("pages") || !root.at("pages").is_array())
    throw ValidationError("layout: 'pages' must be an array");

  const auto &pages = root.at("pages");
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const auto &jp = pages[p];
    const auto page_name = "page " + std::to_string(p);
    if (!jp.is_object()) throw ValidationError(page_name + ": must be an object");
    LayoutPage page;
    if (jp.contains("aspect")) {
      const auto &a = jp.at("aspect");
      if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
        throw ValidationError(page_name + ": aspect must be [w, h]");
      page.width_ratio = a[0].get<double>();
      page.height_ratio = a[1].get<double>();
    }
    if (jp.contains("boxes")) {
      const auto &boxes = jp.at("boxes");
      if (!boxes.is_array()) throw ValidationError(page_name + ": boxes must be an array");
      for (std::size_t i = 0; i < boxes.size(); ++i) {
        const auto &jb = boxes[i];
        const auto where = box_name(p, i);
        if (!jb.is_object()) throw ValidationError(where + ": must be an object");
        LayoutBox box;
        const auto role = jb.value("role", std::string("text"));
        if (role == "text") box.role = BoxRole::text;
        else if (role == "figure") box.role = BoxRole::figure;
        else throw ValidationError(where + ": unknown role '" + role + "'");
        box.x = number_field(jb, "x", where);
        box.y = number_field(jb, "y", where);
        box.w = number_field(jb, "w", where);
        box.h = number_field(jb, "h", where);
        if (jb.contains("fill")) box.fill = color_field(jb, where);
        page.boxes.push_back(box);
      }
    }
    doc.pages.push_back(std::move(page));
  }
  validate_layout(doc);
  return doc;
}

LayoutDocument load_layout(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open layout file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_layout(ss.str());
}

std::string serialize_layout(const LayoutDocument &doc) {
  json root;
  root["title"] = doc.title;
  root["pages"] = json::array();
  for (const auto &page : doc.pages) {
    json jp;
    jp["aspect"] = {page.width_ratio, page.height_ratio};
    jp["boxes"] = json::array();
    for (const auto &b : page.boxes) {
      jp["boxes"].push_back({{"role", b.role == BoxRole::text ? "text" : "figure"},
                             {"x", b.x},
                             {"y", b.y},
                             {"w", b.w},
                             {"h", b.h},
                             {"fill", {b.fill(0), b.fill(1), b.fill(2)}}});
    }
    root["pages"].push_back(std::move(jp));
  }
  return root.dump(2);
}

ForegroundMask rasterize_mask(const LayoutPage &page, int grid_h, int grid_w,
                              double boundary_weight, const RasterOptions &opts) {
  if (grid_h < 1 || grid_w < 1) throw InvalidConfig("rasterize: grid dims must be >= 1");
  if (!(boundary_weight > 0.0 && boundary_weight <= 1.0))
    throw InvalidConfig("rasterize: boundary weight must lie in (0, 1]");

  const auto n = std::size_t(grid_h) * std::size_t(grid_w);
  ForegroundMask mask = ForegroundMask::empty(n);
  const double gw = grid_w, gh = grid_h;

  for (const auto &box : page.boxes) {
    if (box.role == BoxRole::text && !opts.include_text) continue;
    if (box.role == BoxRole::figure && !opts.include_figures) continue;
    const double x1 = box.x + box.w, y1 = box.y + box.h;
    // Candidate range widened by one cell; the exact edge test below decides.
    const int c_lo = std::max(0, int(std::floor(box.x * gw)) - 1);
    const int c_hi = std::min(grid_w - 1, int(std::ceil(x1 * gw)) + 1);
    const int r_lo = std::max(0, int(std::floor(box.y * gh)) - 1);
    const int r_hi = std::min(grid_h - 1, int(std::ceil(y1 * gh)) + 1);
    for (int r = r_lo; r <= r_hi; ++r) {
      const double cy0 = double(r) / gh, cy1 = double(r + 1) / gh;
      if (!(y1 > cy0 && cy1 > box.y)) continue;
      const bool rows_inside = box.y <= cy0 && cy1 <= y1;
      for (int c = c_lo; c <= c_hi; ++c) {
        const double cx0 = double(c) / gw, cx1 = double(c + 1) / gw;
        if (!(x1 > cx0 && cx1 > box.x)) continue;
        const auto k = std::size_t(r) * std::size_t(grid_w) + std::size_t(c);
        const bool inside = rows_inside && box.x <= cx0 && cx1 <= x1;
        mask.m[k] = 1;
        mask.interior_weight[k] =
            std::max(mask.interior_weight[k], inside ? 1.0 : boundary_weight);
      }
    }
  }
  return mask;
}

LayoutDocument synthetic_document(int pages, int grid_h, int grid_w, std::uint64_t seed) {
  if (pages < 1) throw InvalidConfig("synthetic document needs at least one page");
  if (grid_h < 12 || grid_w < 8) throw InvalidConfig("synthetic document needs a grid of at least 12x8");

  LayoutDocument doc;
  doc.title = "synthetic-" + std::to_string(seed);
  const double gw = grid_w, gh = grid_h;

  for (int p = 0; p < pages; ++p) {
    const CounterRng rng(seed, streams::kLayout, std::uint64_t(p));
    std::uint64_t draw = 0;
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(draw++); };
    auto pick = [&](int lo, int hi) {  // inclusive
      return lo + int(std::floor(rng.uniform(draw++) * double(hi - lo + 1)));
    };

    LayoutPage page;
    if (p % 2 == 0) {
      page.width_ratio = 210.0;
      page.height_ratio = 297.0;
    } else {
      page.width_ratio = 16.0;
      page.height_ratio = 9.0;
    }

    // Box spans whole cells [c0, c1] x [r0, r1]; each edge is pulled inward
    // by 10-35% of a cell so the surrounding ring mostly overlaps the
    // partially covered boundary cells.
    auto make_box = [&](BoxRole role, int r0, int r1, int c0, int c1, Rgb fill) {
      const double l = (c0 + uniform(0.65, 0.9)) / gw;
      const double r = (c1 + 1 - uniform(0.65, 0.9)) / gw;
      const double t = (r0 + uniform(0.65, 0.9)) / gh;
      const double b = (r1 + 1 - uniform(0.65, 0.9)) / gh;
      return LayoutBox{role, l, t, r - l, b - t, fill};
    };
    auto dark = [&]() {
      const double v = uniform(0.02, 0.15);
      return Rgb(v, v, v + uniform(0.0, 0.05));
    };

    const int margin = std::max(1, grid_w / 12);
    int row = 1 + pick(0, 1);
    // title band
    page.boxes.push_back(make_box(BoxRole::text, row, row + 1, margin,
                                  grid_w - 1 - margin - pick(0, grid_w / 4), dark()));
    row += 2 + 2;
    const bool figure = (p % 3) == 1;
    while (row + 3 < grid_h - 1) {
      const int height = pick(2, 4);
      const int r1 = std::min(row + height - 1, grid_h - 2);
      if (figure && page.boxes.size() == 2) {
        const int c1 = grid_w / 2 - 1;
        page.boxes.push_back(make_box(BoxRole::figure, row, r1, margin, c1,
                                      Rgb(uniform(0.2, 0.8), uniform(0.2, 0.8), uniform(0.2, 0.8))));
        page.boxes.push_back(make_box(BoxRole::text, row, r1, c1 + 2, grid_w - 1 - margin, dark()));
      } else {
        page.boxes.push_back(make_box(BoxRole::text, row, r1, margin,
                                      grid_w - 1 - margin - pick(0, 2), dark()));
      }
      row = r1 + 1 + pick(2, 3);
    }
    doc.pages.push_back(std::move(page));
  }
  validate_layout(doc);
  return doc;
}

}  // namespace ssc
