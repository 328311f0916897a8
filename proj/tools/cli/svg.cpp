#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "acyl/io.hpp"

namespace acyl::cli {

std::string svg_plot(const GridFunction& u, const std::string& title, bool log_scale) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
  std::vector<double> ys(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    ys[i] = log_scale ? std::log10(std::max(std::abs(u[i]), 1e-300)) : u[i];
  }
  double lo = *std::min_element(ys.begin(), ys.end());
  double hi = *std::max_element(ys.begin(), ys.end());
  if (hi - lo < 1e-300) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double t0 = u.grid.t_min(), t1 = u.grid.t_max();
  auto x_of = [&](double t) { return L + (t - t0) / (t1 - t0) * (W - L - R); };
  auto y_of = [&](double y) { return H - B - (y - lo) / (hi - lo) * (H - T - B); };

  std::string pts;
  const std::size_t stride = std::max<std::size_t>(1, u.size() / 1000);
  for (std::size_t i = 0; i < u.size(); i += stride) {
    pts += fmt::format("{:.2f},{:.2f} ", x_of(u.t(i)), y_of(ys[i]));
  }
  std::string s;
  s += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      W, H);
  s += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"14\">{}</text>\n", L, title);
  s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#444\"/>\n",
                   L, T, W - L - R, H - T - B);
  s += fmt::format("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                   pts);
  s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", L, H - B + 18, io::format_double(t0));
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", W - R, H - B + 18,
                   io::format_double(t1));
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t</text>\n", (L + W - R) / 2,
                   H - 12);
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n", L - 6, T + 4, hi);
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n", L - 6, H - B, lo);
  if (log_scale) {
    s += fmt::format("<text x=\"12\" y=\"{}\" transform=\"rotate(-90 12 {})\">log10 |value|</text>\n",
                     H / 2, H / 2);
  }
  s += "</svg>\n";
  return s;
}

void write_svg(const std::filesystem::path& path, const GridFunction& u, const std::string& title,
               bool log_scale) {
  io::write_file(path, svg_plot(u, title, log_scale));
}

}  // namespace acyl::cli
