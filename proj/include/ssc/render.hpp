#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ssc/common.hpp"
#include "ssc/latent.hpp"
#include "ssc/layout.hpp"

namespace ssc {

/// Fixed linear latent-to-color map: clamp(W x + bias) per token.
struct ToyDecoder {
  Eigen::Matrix<double, 3, Eigen::Dynamic> W;
  Rgb bias;

  /// Seeded W with N(0, scale^2 / d) entries.
  static ToyDecoder seeded(int d, std::uint64_t seed, double scale = 0.6,
                           Rgb bias = Rgb(0.93, 0.92, 0.89));

  [[nodiscard]] Rgb color(const Eigen::Ref<const Eigen::VectorXd> &token) const;
};

/// Row-major RGB raster, one row per pixel, components in [0, 1].
struct PageImage {
  int height = 0;
  int width = 0;
  int patch = 1;
  int page_id = 0;
  std::string config_hash;
  Eigen::Array<double, Eigen::Dynamic, 3, Eigen::RowMajor> rgb;

  [[nodiscard]] Rgb at(int y, int x) const {
    return rgb.row(Eigen::Index(y) * width + x).transpose().matrix();
  }
  void set(int y, int x, const Rgb &c) { rgb.row(Eigen::Index(y) * width + x) = c.transpose().array(); }
};

/// Each token becomes a patch x patch block of its decoded color.
PageImage decode(const LatentState<double> &state, const ToyDecoder &dec, int patch);

/// Opaque foreground: pixels whose centers fall inside a box take its fill.
PageImage composite(PageImage bg, const LayoutPage &page);

/// sRGB relative luminance.
double relative_luminance(const Rgb &c);

/// (L_light + 0.05) / (L_dark + 0.05).
double contrast_from_luminance(double l1, double l2);
double contrast_ratio(const Rgb &c1, const Rgb &c2);

struct BoxContrast {
  std::size_t box_index = 0;
  std::size_t ring_pixels = 0;
  Rgb ring_mean = Rgb::Zero();
  double ratio = 0.0;
};

/// Contrast of every text box against the mean color of the ring of pixels
/// within one patch outside it (pixels inside any box are excluded). Boxes
/// whose ring is empty are omitted.
std::vector<BoxContrast> text_contrast(const PageImage &img, const LayoutPage &page);

/// Fraction of measurable text boxes with contrast >= threshold; nullopt
/// when the page has no measurable text box.
std::optional<double> wcag_coverage(const PageImage &img, const LayoutPage &page,
                                    double threshold = 4.5);

/// Binary P6, 8 bits per channel, round half up.
std::string encode_ppm(const PageImage &img);
void write_ppm(const PageImage &img, const std::filesystem::path &path);

}  // namespace ssc
