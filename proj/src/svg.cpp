// Copyright 2026 The topotex Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "topotex/svg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <sstream>

namespace topotex::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
constexpr const char* kRed = "#d62728";
constexpr const char* kBlue = "#1f5fbf";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const Style& style, double w = kWidth, double h = kHeight) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (!style.reproducible) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "<!-- generated " << buf << " -->\n";
  }
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    os << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(style.title)
       << "</text>\n";
  }
  return os.str();
}

/// Maps data coordinates onto the plot area.
struct Frame {
  double x0, x1, y0, y1;  // data ranges; x0 maps to the left edge, y0 to the bottom
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void axes(std::ostringstream& os, const Frame& f, const std::string& xlabel, const std::string& ylabel,
          const std::vector<double>& xticks, const std::vector<double>& yticks) {
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(kWidth - kRight)
     << "\" y2=\"" << num(kHeight - kBottom) << "\"/>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
     << num(kHeight - kBottom) << "\"/>\n";
  for (double t : xticks) {
    os << "<line x1=\"" << num(f.px(t)) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(f.px(t))
       << "\" y2=\"" << num(kHeight - kBottom + 5) << "\"/>\n";
  }
  for (double t : yticks) {
    os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(f.py(t)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
       << num(f.py(t)) << "\"/>\n";
  }
  os << "</g>\n";
  for (double t : xticks) {
    os << "<text x=\"" << num(f.px(t)) << "\" y=\"" << num(kHeight - kBottom + 18) << "\" text-anchor=\"middle\">"
       << std::lround(t) << "</text>\n";
  }
  for (double t : yticks) {
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(f.py(t) + 4) << "\" text-anchor=\"end\">"
       << std::lround(t) << "</text>\n";
  }
  os << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 10)
     << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << num((kTop + kHeight - kBottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << num((kTop + kHeight - kBottom) / 2) << ")\">" << escape(ylabel) << "</text>\n";
}

const std::vector<double> kIntensityTicks = {255, 200, 150, 100, 50, 0};

std::string base64(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < bytes.size(); i += 3) {
    const std::uint32_t b0 = bytes[i];
    const std::uint32_t b1 = i + 1 < bytes.size() ? bytes[i + 1] : 0;
    const std::uint32_t b2 = i + 2 < bytes.size() ? bytes[i + 2] : 0;
    const std::uint32_t v = (b0 << 16) | (b1 << 8) | b2;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += i + 2 < bytes.size() ? kAlphabet[v & 63] : '=';
  }
  return out;
}

}  // namespace

std::string class_color(const std::string& label) {
  static const std::map<std::string, std::string> kPalette = {
      {"flowers", "#e41a1c"}, {"sugar", "#e6c619"}, {"gravel", "#2ca02c"}, {"fish", "#1f77b4"}};
  const auto it = kPalette.find(label);
  return it == kPalette.end() ? "#7f7f7f" : it->second;
}

std::string barcode(const Barcode& bc, const Style& style) {
  std::ostringstream os;
  os << header(style);
  const std::size_t rows = std::max<std::size_t>(bc.bars.size(), 1);
  // x is the cutoff: 255 on the left, 0 on the right.
  const Frame f{255, -12, 0, static_cast<double>(rows) + 1};
  axes(os, f, "intensity cutoff", "bar", kIntensityTicks, {});
  const double thickness = std::clamp((kHeight - kTop - kBottom) / (rows + 1) * 0.6, 0.5, 6.0);
  std::size_t row = 0;
  for (const auto& bar : bc.bars) {
    const double y = f.py(static_cast<double>(rows - row));
    const double x0 = f.px(bar.birth);
    const double x1 = bar.death ? f.px(*bar.death) : kWidth - kRight;
    os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x1) << "\" y2=\"" << num(y)
       << "\" stroke=\"" << (bar.dim == 0 ? kRed : kBlue) << "\" stroke-width=\"" << num(thickness) << "\""
       << (bar.infinite() ? " marker-end=\"url(#ray)\"" : "") << "/>\n";
    ++row;
  }
  os << "<defs><marker id=\"ray\" markerWidth=\"6\" markerHeight=\"6\" refX=\"3\" refY=\"3\" orient=\"auto\">"
        "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"" << kRed << "\"/></marker></defs>\n";
  os << "<text x=\"" << num(kWidth - kRight - 90) << "\" y=\"" << num(kTop + 4) << "\" fill=\"" << kRed << "\">H0</text>";
  os << "<text x=\"" << num(kWidth - kRight - 60) << "\" y=\"" << num(kTop + 4) << "\" fill=\"" << kBlue << "\">H1</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string diagram(const Barcode& bc, const Style& style) {
  std::ostringstream os;
  os << header(style);
  // Both axes run from high to low intensity so features sit above the diagonal.
  const Frame f{255, 0, 255, -20};
  axes(os, f, "birth intensity", "death intensity", kIntensityTicks, kIntensityTicks);
  const double inf_y = f.py(-12);
  os << "<line x1=\"" << num(f.px(255)) << "\" y1=\"" << num(f.py(255)) << "\" x2=\"" << num(f.px(0)) << "\" y2=\""
     << num(f.py(0)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(inf_y) << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
     << num(inf_y) << "\" stroke=\"#999\" stroke-dasharray=\"2 2\"/>\n";
  os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(inf_y + 4) << "\" text-anchor=\"end\">+∞</text>\n";
  for (const auto& bar : bc.bars) {
    const double y = bar.death ? f.py(*bar.death) : inf_y;
    os << "<circle cx=\"" << num(f.px(bar.birth)) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\""
       << (bar.dim == 0 ? kRed : kBlue) << "\" fill-opacity=\"0.8\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string landscape(const SampledLandscape& ls, const Style& style) {
  std::ostringstream os;
  os << header(style);
  double lo = 0.0, hi = 1.0;
  for (const auto* block : {&ls.h0, &ls.h1}) {
    for (const auto& c : *block) {
      for (double v : c) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  hi *= 1.05;
  // Horizontal axis is intensity = 255 - t, decreasing left to right.
  const Frame f{255.0 - ls.grid.min, 255.0 - ls.grid.max, lo, hi};
  std::vector<double> yticks;
  const double step = std::max(1.0, std::pow(10.0, std::floor(std::log10(std::max(hi - lo, 1.0)))));
  for (double t = std::ceil(lo / step) * step; t <= hi; t += step) yticks.push_back(t);
  axes(os, f, "intensity cutoff", "landscape value", kIntensityTicks, yticks);
  if (lo < 0) {
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(f.py(0)) << "\" x2=\"" << num(kWidth - kRight)
       << "\" y2=\"" << num(f.py(0)) << "\" stroke=\"#bbb\"/>\n";
  }
  for (int dim = 0; dim <= 1; ++dim) {
    const auto& block = dim == 0 ? ls.h0 : ls.h1;
    for (std::size_t i = 0; i < block.size(); ++i) {
      const auto& c = block[i];
      const double opacity = 1.0 - 0.15 * static_cast<double>(i);
      for (std::size_t j = 0; j + 1 < c.size(); ++j) {
        bool violates = false;
        if (ls.is_virtual) {
          violates = c[j] < 0 || c[j + 1] < 0;
          if (i + 1 < block.size()) violates = violates || block[i + 1][j] > c[j] || block[i + 1][j + 1] > c[j + 1];
        }
        os << "<line x1=\"" << num(f.px(255.0 - ls.grid.at(static_cast<int>(j)))) << "\" y1=\"" << num(f.py(c[j]))
           << "\" x2=\"" << num(f.px(255.0 - ls.grid.at(static_cast<int>(j + 1)))) << "\" y2=\"" << num(f.py(c[j + 1]))
           << "\" stroke=\"" << (dim == 0 ? kRed : kBlue) << "\" stroke-opacity=\"" << num(opacity)
           << "\" stroke-width=\"1.5\"" << (violates ? " stroke-dasharray=\"3 2\"" : "") << "/>\n";
      }
    }
  }
  if (ls.is_virtual) {
    os << "<text x=\"" << num(kWidth - kRight - 4) << "\" y=\"" << num(kTop + 4)
       << "\" text-anchor=\"end\" font-style=\"italic\">virtual</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<View> canonical_views() { return {{-60.0, 25.0}, {30.0, 25.0}, {120.0, 25.0}}; }

std::string scatter3d(const Eigen::MatrixXd& points, const std::vector<std::string>& labels, const SvmModel* svm,
                      const View& view, const Style& style) {
  std::ostringstream os;
  const double size = 480;
  os << header(style, size, size);
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(-1), hi = Eigen::Vector3d::Constant(1);
  if (points.rows() > 0) {
    lo = points.colwise().minCoeff().transpose();
    hi = points.colwise().maxCoeff().transpose();
  }
  const Eigen::Vector3d center = (lo + hi) / 2;
  const double scale = std::max(1e-12, (hi - lo).maxCoeff() / 2);
  const double az = view.azimuth_deg * M_PI / 180, el = view.elevation_deg * M_PI / 180;
  auto screen = [&](const Eigen::Vector3d& p) {
    const Eigen::Vector3d q = (p - center) / scale;
    const double u = -std::sin(az) * q.x() + std::cos(az) * q.y();
    const double v = -std::cos(az) * std::sin(el) * q.x() - std::sin(az) * std::sin(el) * q.y() + std::cos(el) * q.z();
    return Eigen::Vector2d(size / 2 + u * size * 0.27, size / 2 + 10 - v * size * 0.27);
  };
  // Bounding box edges.
  os << "<g stroke=\"#ccc\" stroke-width=\"0.8\">\n";
  for (int a = 0; a < 3; ++a) {
    for (int m = 0; m < 4; ++m) {
      Eigen::Vector3d p0, p1;
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      p0[a] = lo[a];
      p1[a] = hi[a];
      p0[b] = p1[b] = (m & 1) ? hi[b] : lo[b];
      p0[c] = p1[c] = (m & 2) ? hi[c] : lo[c];
      const auto s0 = screen(p0), s1 = screen(p1);
      os << "<line x1=\"" << num(s0.x()) << "\" y1=\"" << num(s0.y()) << "\" x2=\"" << num(s1.x()) << "\" y2=\""
         << num(s1.y()) << "\"/>\n";
    }
  }
  os << "</g>\n";
  if (svm && svm->w.size() == 3 && svm->w.norm() > 0) {
    // Solve the plane for its dominant coordinate over a grid of the other two.
    Eigen::Index dep = 0;
    svm->w.cwiseAbs().maxCoeff(&dep);
    const int a = (static_cast<int>(dep) + 1) % 3, c = (static_cast<int>(dep) + 2) % 3;
    auto solve = [&](double va, double vc) {
      Eigen::Vector3d p;
      p[a] = va;
      p[c] = vc;
      p[dep] = (svm->b - svm->w[a] * va - svm->w[c] * vc) / svm->w[dep];
      return p;
    };
    os << "<g stroke=\"#444\" stroke-width=\"0.7\" stroke-opacity=\"0.6\">\n";
    constexpr int kLines = 8;
    for (int i = 0; i <= kLines; ++i) {
      const double ta = lo[a] + (hi[a] - lo[a]) * i / kLines;
      const double tc = lo[c] + (hi[c] - lo[c]) * i / kLines;
      for (const auto& [p0, p1] : {std::pair{solve(ta, lo[c]), solve(ta, hi[c])}, std::pair{solve(lo[a], tc), solve(hi[a], tc)}}) {
        const auto s0 = screen(p0), s1 = screen(p1);
        os << "<line x1=\"" << num(s0.x()) << "\" y1=\"" << num(s0.y()) << "\" x2=\"" << num(s1.x()) << "\" y2=\""
           << num(s1.y()) << "\"/>\n";
      }
    }
    os << "</g>\n";
  }
  os << "<g stroke=\"black\" stroke-width=\"0.3\">\n";
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto s = screen(points.row(i).transpose());
    os << "<circle cx=\"" << num(s.x()) << "\" cy=\"" << num(s.y()) << "\" r=\"3\" fill=\""
       << class_color(labels[static_cast<std::size_t>(i)]) << "\"/>\n";
  }
  os << "</g>\n";
  // Legend.
  std::vector<std::string> seen;
  for (const auto& l : labels) {
    if (std::find(seen.begin(), seen.end(), l) == seen.end()) seen.push_back(l);
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    const double y = size - 16 - 16.0 * static_cast<double>(seen.size() - 1 - i);
    os << "<circle cx=\"16\" cy=\"" << num(y - 4) << "\" r=\"4\" fill=\"" << class_color(seen[i]) << "\"/>";
    os << "<text x=\"26\" y=\"" << num(y) << "\">" << escape(seen[i]) << "</text>\n";
  }
  os << "<text x=\"" << num(size - 8) << "\" y=\"" << num(size - 8) << "\" text-anchor=\"end\" fill=\"#666\">az "
     << view.azimuth_deg << "°, el " << view.elevation_deg << "°</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string image(const GrayImage& img, const Style& style) {
  const double scale = std::min(1.0, 480.0 / std::max(img.width(), img.height())) *
                       (std::max(img.width(), img.height()) < 240 ? 2.0 : 1.0);
  const double w = img.width() * scale, h = img.height() * scale;
  std::ostringstream os;
  os << header(style, w + 20, h + 50);
  os << "<image x=\"10\" y=\"40\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" style=\"image-rendering:pixelated\" href=\"data:image/png;base64," << base64(encode_png(img)) << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace topotex::svg
