#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "ssc/common.hpp"
#include "ssc/layout.hpp"

using namespace ssc;

namespace {

LayoutPage page_with(std::vector<LayoutBox> boxes) {
  LayoutPage p;
  p.boxes = std::move(boxes);
  return p;
}

LayoutBox text_box(double x, double y, double w, double h) {
  return LayoutBox{BoxRole::text, x, y, w, h, Rgb::Zero()};
}

bool same_as_oracle(const ForegroundMask &m, const std::vector<oracle::MaskCell> &ref) {
  if (m.size() != ref.size()) return false;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    if ((m.m[k] != 0) != ref[k].on) return false;
    if (m.interior_weight[k] != ref[k].weight) return false;
  }
  return true;
}

std::string error_of(std::string_view text) {
  try {
    (void)parse_layout(text);
  } catch (const Error &e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("layout") {
  TEST_CASE("parse examples") {
    const auto doc = parse_layout(R"({"title": "t", "pages": [{"aspect": [210, 297],
      "boxes": [{"role": "text", "x": 0.1, "y": 0.1, "w": 0.8, "h": 0.1, "fill": [0, 0, 0]}]}]})");
    REQUIRE(doc.pages.size() == 1);
    REQUIRE(doc.pages[0].boxes.size() == 1);
    CHECK(doc.title == "t");
    CHECK(doc.pages[0].width_ratio == 210.0);
    CHECK(doc.pages[0].boxes[0].w == 0.8);

    CHECK_THROWS_AS(parse_layout(R"({"pages": []})"), ValidationError);
    const auto msg = error_of(R"({"pages": [{"boxes": [{"x": 0.5, "y": 0, "w": 0.7, "h": 0.1}]}]})");
    CHECK(msg.find("page 0 box 0") != std::string::npos);
    CHECK(msg.find("exceeds 1") != std::string::npos);
    CHECK_THROWS_AS(parse_layout(R"({"pages": [{"boxes": [{"x": 0.5, "y": 0, "w": 0.7, "h": 0.1}]}]})"),
                    ValidationError);
  }

  TEST_CASE("syntax errors carry a line and column") {
    const auto msg = error_of("{\n  \"pages\": [\n    {,}\n]}");
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK_THROWS_AS(parse_layout("{\n  \"pages\": [\n    {,}\n]}"), ParseError);
  }

  TEST_CASE("schema errors") {
    CHECK_THROWS_AS(parse_layout(R"({"pages": [{"boxes": [{"role": "logo", "x": 0, "y": 0, "w": 1, "h": 1}]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_layout(R"({"pages": [{"boxes": [{"x": 0, "y": 0, "w": 0, "h": 1}]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_layout(R"({"pages": [{"aspect": [0, 1]}]})"), ValidationError);
    CHECK_THROWS_AS(
        parse_layout(R"({"pages": [{"boxes": [{"x": 0, "y": 0, "w": 1, "h": 1, "fill": [2, 0, 0]}]}]})"),
        ValidationError);
  }

  TEST_CASE("serialize round trip") {
    const auto doc = synthetic_document(3, 32, 24, 5);
    const auto again = parse_layout(serialize_layout(doc));
    REQUIRE(again.pages.size() == doc.pages.size());
    for (std::size_t p = 0; p < doc.pages.size(); ++p) {
      REQUIRE(again.pages[p].boxes.size() == doc.pages[p].boxes.size());
      for (std::size_t i = 0; i < doc.pages[p].boxes.size(); ++i) {
        const auto &a = doc.pages[p].boxes[i];
        const auto &b = again.pages[p].boxes[i];
        CHECK(a.role == b.role);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
        CHECK(a.w == b.w);
        CHECK(a.h == b.h);
        CHECK((a.fill == b.fill));
      }
    }
  }

  TEST_CASE("rasterize examples") {
    const auto none = rasterize_mask(LayoutPage{}, 5, 7, 0.5);
    CHECK(none.count() == 0);

    const auto full = rasterize_mask(page_with({text_box(0, 0, 1, 1)}), 5, 7, 0.5);
    CHECK(full.count() == 35);
    CHECK(std::all_of(full.interior_weight.begin(), full.interior_weight.end(), [](double w) { return w == 1.0; }));

    const auto page = page_with({text_box(0.25, 0.25, 0.5, 0.5)});
    const auto quad = rasterize_mask(page, 4, 4, 0.5);
    CHECK(quad.count() == 4);
    for (int r = 1; r <= 2; ++r)
      for (int c = 1; c <= 2; ++c) CHECK(quad.interior_weight[std::size_t(r * 4 + c)] == 1.0);
    CHECK(same_as_oracle(quad, oracle::mask(page, 4, 4, 0.5)));
  }

  TEST_CASE("partial coverage gets the boundary weight") {
    const auto m = rasterize_mask(page_with({text_box(0.3, 0.0, 0.2, 1.0)}), 1, 4, 0.4);
    CHECK(m.m[0] == 0);
    CHECK(m.interior_weight[1] == 0.4);
    CHECK(m.interior_weight[2] == 0.0);
    // an edge exactly on a cell boundary does not touch the next cell
    const auto edge = rasterize_mask(page_with({text_box(0.0, 0.0, 0.5, 1.0)}), 1, 4, 0.4);
    CHECK(edge.count() == 2);
    CHECK(edge.interior_weight[1] == 1.0);
  }

  TEST_CASE("figure toggle") {
    LayoutBox fig = text_box(0.0, 0.0, 0.5, 0.5);
    fig.role = BoxRole::figure;
    const auto page = page_with({fig});
    CHECK(rasterize_mask(page, 4, 4, 0.5).count() == 4);
    RasterOptions text_only;
    text_only.include_figures = false;
    CHECK(rasterize_mask(page, 4, 4, 0.5, text_only).count() == 0);
  }

  TEST_CASE("rasterize argument checks") {
    CHECK_THROWS_AS(rasterize_mask(LayoutPage{}, 0, 4, 0.5), InvalidConfig);
    CHECK_THROWS_AS(rasterize_mask(LayoutPage{}, 4, 4, 0.0), InvalidConfig);
    CHECK_THROWS_AS(rasterize_mask(LayoutPage{}, 4, 4, 1.5), InvalidConfig);
  }

  TEST_CASE("property: matches the cell-intersection oracle bit for bit") {
    std::mt19937_64 gen(17);
    const std::vector<std::pair<int, int>> grids = {{4, 4}, {12, 8}, {32, 24}, {48, 48}};
    for (int trial = 0; trial < 100; ++trial) {
      const auto page = oracle::random_page(gen);
      for (auto [gh, gw] : grids) {
        const double bw = 0.25 + 0.375 * double(trial % 3);
        CHECK(same_as_oracle(rasterize_mask(page, gh, gw, bw), oracle::mask(page, gh, gw, bw)));
      }
    }
  }

  TEST_CASE("property: enlarging a box never clears a bit") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      auto page = oracle::random_page(gen, 4);
      if (page.boxes.empty()) continue;
      const auto before = rasterize_mask(page, 16, 12, 0.5);
      auto &b = page.boxes[gen() % page.boxes.size()];
      const double grow_x = u(gen) * b.x, grow_y = u(gen) * b.y;
      b.x -= grow_x;
      b.y -= grow_y;
      b.w = std::min(b.w + grow_x + u(gen) * 0.2, 1.0 - b.x);
      b.h = std::min(b.h + grow_y + u(gen) * 0.2, 1.0 - b.y);
      const auto after = rasterize_mask(page, 16, 12, 0.5);
      for (std::size_t k = 0; k < before.size(); ++k)
        if (before.m[k]) CHECK(after.m[k] == 1);
    }
  }

  TEST_CASE("property: mask ignores box order") {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 100; ++trial) {
      auto page = oracle::random_page(gen);
      const auto a = rasterize_mask(page, 20, 14, 0.3);
      std::shuffle(page.boxes.begin(), page.boxes.end(), gen);
      const auto b = rasterize_mask(page, 20, 14, 0.3);
      CHECK(a.m == b.m);
      CHECK(a.interior_weight == b.interior_weight);
    }
  }

  TEST_CASE("property: refinement keeps the covered fraction") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      double x0 = u(gen), x1 = u(gen), y0 = u(gen), y1 = u(gen);
      if (x0 > x1) std::swap(x0, x1);
      if (y0 > y1) std::swap(y0, y1);
      if (x1 == x0 || y1 == y0) continue;
      const auto page = page_with({text_box(x0, y0, x1 - x0, y1 - y0)});
      const int gh = 4 + int(gen() % 20), gw = 4 + int(gen() % 20);
      const double coarse = double(rasterize_mask(page, gh, gw, 0.5).count()) / double(gh * gw);
      const double fine = double(rasterize_mask(page, 2 * gh, 2 * gw, 0.5).count()) / double(4 * gh * gw);
      CHECK(std::abs(coarse - fine) <= double(gh + gw) / double(gh * gw) + 1e-15);
    }
  }

  TEST_CASE("synthetic document") {
    const auto doc = synthetic_document(7, 32, 24, 3);
    REQUIRE(doc.pages.size() == 7);
    CHECK(doc.pages[0].width_ratio == 210.0);
    CHECK(doc.pages[1].width_ratio == 16.0);
    bool has_figure = false;
    for (const auto &page : doc.pages) {
      CHECK(page.boxes.size() >= 3);
      for (const auto &b : page.boxes) has_figure |= b.role == BoxRole::figure;
      CHECK(rasterize_mask(page, 32, 24, 0.5).count() > 0);
    }
    CHECK(has_figure);
    CHECK(serialize_layout(synthetic_document(7, 32, 24, 3)) == serialize_layout(doc));
    CHECK(serialize_layout(synthetic_document(7, 32, 24, 4)) != serialize_layout(doc));
    CHECK_THROWS_AS(synthetic_document(0, 32, 24, 1), InvalidConfig);
    CHECK_THROWS_AS(synthetic_document(2, 8, 8, 1), InvalidConfig);
  }
}
