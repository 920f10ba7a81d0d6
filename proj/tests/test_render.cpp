#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ssc/render.hpp"

using namespace ssc;

namespace {

PageImage flat_image(int h, int w, int patch, const Rgb &c) {
  PageImage img;
  img.height = h;
  img.width = w;
  img.patch = patch;
  img.rgb.resize(Eigen::Index(h) * w, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.set(y, x, c);
  return img;
}

double srgb_channel(double v) {
  if (v <= 0.04045) return v / 12.92;
  return std::pow((v + 0.055) / 1.055, 2.4);
}

double luminance_oracle(const Rgb &c) {
  return 0.2126 * srgb_channel(c(0)) + 0.7152 * srgb_channel(c(1)) + 0.0722 * srgb_channel(c(2));
}

bool center_in(const LayoutBox &b, int y, int x, int h, int w, double grow) {
  const double cx = x + 0.5, cy = y + 0.5;
  return cx >= b.x * w - grow && cx < (b.x + b.w) * w + grow && cy >= b.y * h - grow && cy < (b.y + b.h) * h + grow;
}

// Ring mean and ratio for one box by scanning every pixel of the image.
std::optional<std::pair<Rgb, double>> ring_oracle(const PageImage &img, const LayoutPage &page, std::size_t i) {
  Rgb sum = Rgb::Zero();
  int count = 0;
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      if (!center_in(page.boxes[i], y, x, img.height, img.width, img.patch)) continue;
      bool covered = false;
      for (const auto &b : page.boxes) covered |= center_in(b, y, x, img.height, img.width, 0.0);
      if (covered) continue;
      for (int c = 0; c < 3; ++c) sum(c) += img.rgb(Eigen::Index(y) * img.width + x, c);
      ++count;
    }
  if (count == 0) return std::nullopt;
  const Rgb mean = sum / count;
  const double l1 = luminance_oracle(page.boxes[i].fill), l2 = luminance_oracle(mean);
  return std::make_pair(mean, (std::max(l1, l2) + 0.05) / (std::min(l1, l2) + 0.05));
}

LayoutBox box(double x, double y, double w, double h, Rgb fill, BoxRole role = BoxRole::text) {
  return LayoutBox{role, x, y, w, h, fill};
}

}  // namespace

TEST_SUITE("render") {
  TEST_CASE("decode examples") {
    ToyDecoder dec;
    dec.W = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, 2);
    dec.bias = Rgb(0.5, 0.5, 0.5);
    LatentState<double> x;
    x.grid_h = 2;
    x.grid_w = 3;
    x.tokens = TokenMatrix<double>::Random(6, 2);
    const auto img = decode(x, dec, 4);
    CHECK(img.height == 8);
    CHECK(img.width == 12);
    CHECK(((img.rgb - 0.5).abs() == 0.0).all());
    CHECK_THROWS_AS(decode(x, dec, 0), InvalidConfig);
  }

  TEST_CASE("decoded patches are block constant and clamped") {
    const auto dec = ToyDecoder::seeded(4, 7, 5.0);
    LatentState<double> x;
    x.grid_h = 3;
    x.grid_w = 2;
    x.tokens = 4.0 * TokenMatrix<double>::Random(6, 4);
    const auto img = decode(x, dec, 3);
    CHECK((img.rgb >= 0.0).all());
    CHECK((img.rgb <= 1.0).all());
    for (int y = 0; y < img.height; ++y)
      for (int xx = 0; xx < img.width; ++xx) {
        const Rgb expected = dec.color(x.tokens.row((y / 3) * 2 + xx / 3).transpose());
        CHECK((img.at(y, xx) == expected));
      }
    CHECK((decode(x, dec, 3).rgb == img.rgb).all());
    // b = 0 decodes to the bias colour
    CHECK((dec.color(Eigen::VectorXd::Zero(4)) == dec.bias));
  }

  TEST_CASE("seeded decoders are reproducible") {
    CHECK(ToyDecoder::seeded(8, 3).W == ToyDecoder::seeded(8, 3).W);
    CHECK(ToyDecoder::seeded(8, 3).W != ToyDecoder::seeded(8, 4).W);
  }

  TEST_CASE("composite examples") {
    const auto bg = flat_image(8, 8, 2, Rgb(1, 1, 1));
    CHECK((composite(bg, LayoutPage{}).rgb == bg.rgb).all());

    LayoutPage full;
    full.boxes.push_back(box(0, 0, 1, 1, Rgb(0.2, 0.3, 0.4)));
    const auto all = composite(bg, full);
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) CHECK((all.at(y, x) == Rgb(0.2, 0.3, 0.4)));

    LayoutPage part;
    part.boxes.push_back(box(0.25, 0.25, 0.5, 0.5, Rgb(0, 0, 0)));
    const auto img = composite(bg, part);
    CHECK((img.at(4, 4) == Rgb::Zero()));
    CHECK((img.at(0, 0) == Rgb::Ones()));
    CHECK((img.at(2, 2) == Rgb::Zero()));
    CHECK((img.at(6, 6) == Rgb::Ones()));
  }

  TEST_CASE("contrast examples") {
    CHECK(contrast_ratio(Rgb::Zero(), Rgb::Ones()) == doctest::Approx(21.0).epsilon(1e-12));
    const Rgb c(0.3, 0.6, 0.2);
    CHECK(contrast_ratio(c, c) == 1.0);
    CHECK(contrast_from_luminance(0.2, 0.05) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(contrast_from_luminance(0.05, 0.2) == doctest::Approx(2.5).epsilon(1e-15));
  }

  TEST_CASE("property: contrast is symmetric, at least 1, and 21 only at the extremes") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const Rgb a(u(gen), u(gen), u(gen)), b(u(gen), u(gen), u(gen));
      const double r = contrast_ratio(a, b);
      CHECK(r == contrast_ratio(b, a));
      CHECK(r >= 1.0);
      CHECK(r < 21.0);
      CHECK(relative_luminance(a) == doctest::Approx(luminance_oracle(a)).epsilon(1e-15));
    }
  }

  TEST_CASE("wcag coverage examples") {
    const auto white = flat_image(32, 32, 4, Rgb::Ones());
    LayoutPage page;
    page.boxes.push_back(box(0.2, 0.2, 0.3, 0.1, Rgb::Zero()));
    page.boxes.push_back(box(0.2, 0.6, 0.5, 0.1, Rgb::Zero()));
    CHECK(wcag_coverage(composite(white, page), page).value() == 1.0);

    LayoutPage same;
    same.boxes.push_back(box(0.2, 0.2, 0.3, 0.1, Rgb::Ones()));
    CHECK(wcag_coverage(composite(white, same), same).value() == 0.0);

    LayoutPage figures_only;
    figures_only.boxes.push_back(box(0.2, 0.2, 0.3, 0.3, Rgb::Zero(), BoxRole::figure));
    CHECK_FALSE(wcag_coverage(white, figures_only).has_value());
    CHECK_FALSE(wcag_coverage(white, LayoutPage{}).has_value());
    CHECK_THROWS_AS(wcag_coverage(white, page, 0.5), InvalidConfig);
  }

  TEST_CASE("ring means match a per-pixel scan") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      LatentState<double> x;
      x.grid_h = 16;
      x.grid_w = 12;
      x.tokens = 2.0 * TokenMatrix<double>::Random(16 * 12, 6);
      const auto dec = ToyDecoder::seeded(6, std::uint64_t(trial));
      const auto page = oracle::random_page(gen, 5);
      const auto img = composite(decode(x, dec, 4), page);
      const auto measured = text_contrast(img, page);
      std::size_t j = 0;
      for (std::size_t i = 0; i < page.boxes.size(); ++i) {
        if (page.boxes[i].role != BoxRole::text) continue;
        const auto ref = ring_oracle(img, page, i);
        if (!ref) continue;
        REQUIRE(j < measured.size());
        CHECK(measured[j].box_index == i);
        CHECK((measured[j].ring_mean - ref->first).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(std::abs(measured[j].ratio - ref->second) <= 1e-9);
        ++j;
      }
      CHECK(j == measured.size());
    }
  }

  TEST_CASE("property: coverage ignores the background outside the rings") {
    std::mt19937_64 gen(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const auto page = oracle::random_page(gen, 4);
      auto a = flat_image(48, 40, 4, Rgb(u(gen), u(gen), u(gen)));
      auto b = a;
      for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
          bool near = false;
          for (const auto &bx : page.boxes)
            if (bx.role == BoxRole::text) near |= center_in(bx, y, x, a.height, a.width, a.patch);
          if (!near) b.set(y, x, Rgb(u(gen), u(gen), u(gen)));
        }
      const auto ca = wcag_coverage(composite(a, page), page);
      const auto cb = wcag_coverage(composite(b, page), page);
      CHECK(ca.has_value() == cb.has_value());
      if (ca && cb) CHECK(*ca == *cb);
    }
  }

  TEST_CASE("ppm encoding") {
    auto img = flat_image(1, 2, 1, Rgb(0, 0, 0));
    img.set(0, 1, Rgb(1.0, 0.5, 0.6 / 255.0));
    const auto bytes = encode_ppm(img);
    const std::string header = "P6\n2 1\n255\n";
    REQUIRE(bytes.size() == header.size() + 6);
    CHECK(bytes.substr(0, header.size()) == header);
    const auto *p = reinterpret_cast<const unsigned char *>(bytes.data() + header.size());
    CHECK(p[0] == 0);
    CHECK(p[3] == 255);
    CHECK(p[4] == 128);
    CHECK(p[5] == 1);
  }
}
