#include "ssc/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "ssc/rng.hpp"

namespace ssc {
namespace {

struct PixelRect {
  int x0, x1, y0, y1;  // half-open pixel ranges

  [[nodiscard]] bool contains(int y, int x) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }
};

// Pixels whose centers (i + 0.5) lie in [lo, hi).
std::pair<int, int> center_range(double lo, double hi, int extent) {
  const int a = std::max(0, int(std::ceil(lo - 0.5)));
  const int b = std::min(extent, int(std::ceil(hi - 0.5)));
  return {a, std::max(a, b)};
}

PixelRect box_pixels(const LayoutBox &box, int height, int width, double grow = 0.0) {
  const auto [x0, x1] = center_range(box.x * width - grow, (box.x + box.w) * width + grow, width);
  const auto [y0, y1] = center_range(box.y * height - grow, (box.y + box.h) * height + grow, height);
  return {x0, x1, y0, y1};
}

}  // namespace

ToyDecoder ToyDecoder::seeded(int d, std::uint64_t seed, double scale, Rgb bias) {
  if (d < 1) throw InvalidConfig("decoder dim must be >= 1");
  ToyDecoder dec;
  dec.W.resize(3, d);
  const double sd = scale / std::sqrt(double(d));
  for (int c = 0; c < 3; ++c) {
    const CounterRng rng(seed, streams::kDecoder, std::uint64_t(c));
    for (int j = 0; j < d; ++j) dec.W(c, j) = sd * rng.normal(std::uint64_t(j));
  }
  dec.bias = bias;
  return dec;
}

Rgb ToyDecoder::color(const Eigen::Ref<const Eigen::VectorXd> &token) const {
  require_dims(token.size() == W.cols(), "decoder dim != token dim");
  return (W * token + bias).cwiseMax(0.0).cwiseMin(1.0);
}

PageImage decode(const LatentState<double> &state, const ToyDecoder &dec, int patch) {
  if (patch < 1) throw InvalidConfig("patch size must be >= 1");
  require_dims(state.num_tokens() == Eigen::Index(state.grid_h) * state.grid_w,
               "state token count != grid_h*grid_w");
  PageImage img;
  img.height = state.grid_h * patch;
  img.width = state.grid_w * patch;
  img.patch = patch;
  img.page_id = state.page_id;
  img.rgb.resize(Eigen::Index(img.height) * img.width, 3);
  for (int r = 0; r < state.grid_h; ++r) {
    for (int c = 0; c < state.grid_w; ++c) {
      const Rgb col = dec.color(state.tokens.row(Eigen::Index(r) * state.grid_w + c).transpose());
      for (int py = 0; py < patch; ++py)
        for (int px = 0; px < patch; ++px) img.set(r * patch + py, c * patch + px, col);
    }
  }
  return img;
}

PageImage composite(PageImage bg, const LayoutPage &page) {
  for (const auto &box : page.boxes) {
    const auto rect = box_pixels(box, bg.height, bg.width);
    for (int y = rect.y0; y < rect.y1; ++y)
      for (int x = rect.x0; x < rect.x1; ++x) bg.set(y, x, box.fill);
  }
  return bg;
}

double relative_luminance(const Rgb &c) {
  auto lin = [](double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
  };
  return 0.2126 * lin(c(0)) + 0.7152 * lin(c(1)) + 0.0722 * lin(c(2));
}

double contrast_from_luminance(double l1, double l2) {
  const double hi = std::max(l1, l2), lo = std::min(l1, l2);
  return (hi + 0.05) / (lo + 0.05);
}

double contrast_ratio(const Rgb &c1, const Rgb &c2) {
  return contrast_from_luminance(relative_luminance(c1), relative_luminance(c2));
}

std::vector<BoxContrast> text_contrast(const PageImage &img, const LayoutPage &page) {
  std::vector<PixelRect> rects;
  rects.reserve(page.boxes.size());
  for (const auto &box : page.boxes) rects.push_back(box_pixels(box, img.height, img.width));

  std::vector<BoxContrast> out;
  for (std::size_t i = 0; i < page.boxes.size(); ++i) {
    const auto &box = page.boxes[i];
    if (box.role != BoxRole::text) continue;
    const auto outer = box_pixels(box, img.height, img.width, double(img.patch));
    Rgb sum = Rgb::Zero();
    std::size_t count = 0;
    for (int y = outer.y0; y < outer.y1; ++y) {
      for (int x = outer.x0; x < outer.x1; ++x) {
        const bool covered = std::any_of(rects.begin(), rects.end(),
                                         [&](const PixelRect &r) { return r.contains(y, x); });
        if (covered) continue;
        sum += img.at(y, x);
        ++count;
      }
    }
    if (count == 0) continue;
    BoxContrast bc;
    bc.box_index = i;
    bc.ring_pixels = count;
    bc.ring_mean = sum / double(count);
    bc.ratio = contrast_ratio(box.fill, bc.ring_mean);
    out.push_back(bc);
  }
  return out;
}

std::optional<double> wcag_coverage(const PageImage &img, const LayoutPage &page, double threshold) {
  if (!(threshold >= 1.0)) throw InvalidConfig("contrast threshold must be >= 1");
  const auto boxes = text_contrast(img, page);
  if (boxes.empty()) return std::nullopt;
  std::size_t pass = 0;
  for (const auto &b : boxes) pass += b.ratio >= threshold ? 1 : 0;
  return double(pass) / double(boxes.size());
}

std::string encode_ppm(const PageImage &img) {
  std::string out = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  const auto header = out.size();
  out.resize(header + std::size_t(img.rgb.size()));
  std::size_t pos = header;
  for (Eigen::Index p = 0; p < img.rgb.rows(); ++p) {
    for (int c = 0; c < 3; ++c) {
      const double v = std::clamp(img.rgb(p, c), 0.0, 1.0);
      out[pos++] = char(static_cast<unsigned char>(std::floor(v * 255.0 + 0.5)));
    }
  }
  return out;
}

void write_ppm(const PageImage &img, const std::filesystem::path &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write image '" + path.string() + "'");
  const auto bytes = encode_ppm(img);
  f.write(bytes.data(), std::streamsize(bytes.size()));
  if (!f) throw Error("short write on '" + path.string() + "'");
}

}  // namespace ssc
