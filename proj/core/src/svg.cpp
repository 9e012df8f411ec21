#include "tinygan/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "tinygan/errors.hpp"

namespace tinygan {

namespace {

constexpr double kWidth = 960.0, kHeight = 600.0;
constexpr double kLeft = 70.0, kRight = 820.0, kTop = 40.0, kBottom = 550.0;
constexpr int kTicks = 6;
constexpr std::size_t kMaxPlotPoints = 1500;

const char* kSeriesColor[3] = {"#1f77b4", "#d62728", "#2ca02c"};

std::string px(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  double to_px(double v, double px_lo, double px_hi) const {
    return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
  }
};

Axis padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::max(std::abs(lo), 1.0) * 0.5;
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

void append_frame(std::string& svg, const Axis& x, const Axis& y, const std::string& x_label) {
  svg += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"600\" fill=\"#ffffff\"/>\n";
  svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(kBottom) + "\" x2=\"" + px(kRight) + "\" y2=\"" +
         px(kBottom) + "\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop) + "\" x2=\"" + px(kLeft) + "\" y2=\"" +
         px(kBottom) + "\" stroke=\"#333333\"/>\n";
  for (int i = 0; i < kTicks; ++i) {
    const double f = static_cast<double>(i) / (kTicks - 1);
    const double xv = x.lo + f * (x.hi - x.lo);
    const double yv = y.lo + f * (y.hi - y.lo);
    const double xp = x.to_px(xv, kLeft, kRight);
    const double yp = y.to_px(yv, kBottom, kTop);
    svg += "<line x1=\"" + px(xp) + "\" y1=\"" + px(kBottom) + "\" x2=\"" + px(xp) + "\" y2=\"" +
           px(kBottom + 6) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + px(xp) + "\" y=\"" + px(kBottom + 20) +
           "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">" + tick_label(xv) + "</text>\n";
    svg += "<line x1=\"" + px(kLeft - 6) + "\" y1=\"" + px(yp) + "\" x2=\"" + px(kLeft) + "\" y2=\"" +
           px(yp) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + px(kLeft - 10) + "\" y=\"" + px(yp + 4) +
           "\" font-size=\"12\" text-anchor=\"end\" fill=\"#333333\">" + tick_label(yv) + "</text>\n";
  }
  svg += "<text x=\"" + px((kLeft + kRight) / 2) + "\" y=\"" + px(kBottom + 38) +
         "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\">" + x_label + "</text>\n";
}

void append_legend(std::string& svg, const std::vector<std::pair<std::string, const char*>>& entries) {
  double ly = kTop + 10;
  for (const auto& [label, color] : entries) {
    svg += "<rect x=\"" + px(kRight + 14) + "\" y=\"" + px(ly - 9) +
           "\" width=\"18\" height=\"4\" fill=\"" + std::string(color) + "\"/>\n";
    svg += "<text x=\"" + px(kRight + 38) + "\" y=\"" + px(ly) +
           "\" font-size=\"13\" fill=\"#333333\">" + label + "</text>\n";
    ly += 22;
  }
}

void append_polyline(std::string& svg, const std::vector<std::pair<double, double>>& pts,
                     const char* color) {
  svg += "<polyline fill=\"none\" stroke=\"";
  svg += color;
  svg += "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) svg.push_back(' ');
    svg += px(pts[i].first) + "," + px(pts[i].second);
  }
  svg += "\"/>\n";
}

}  // namespace

std::string render_trajectory_svg(const Trajectory& traj, double reference_alpha_r) {
  if (traj.samples.empty()) throw DomainError("cannot plot an empty trajectory");

  double ymin = reference_alpha_r, ymax = reference_alpha_r;
  for (const State& s : traj.samples) {
    ymin = std::min({ymin, s.theta, s.psi, s.alpha});
    ymax = std::max({ymax, s.theta, s.psi, s.alpha});
  }
  const Axis x = {traj.samples.front().t, std::max(traj.samples.back().t, traj.samples.front().t + 1e-9)};
  const Axis y = padded(ymin, ymax);

  const std::size_t stride = traj.samples.size() > kMaxPlotPoints
                                 ? (traj.samples.size() + kMaxPlotPoints - 1) / kMaxPlotPoints
                                 : 1;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"600\" "
                    "viewBox=\"0 0 960 600\">\n";
  append_frame(svg, x, y, "t");

  const double ref_y = y.to_px(reference_alpha_r, kBottom, kTop);
  svg += "<line class=\"ref\" x1=\"" + px(kLeft) + "\" y1=\"" + px(ref_y) + "\" x2=\"" + px(kRight) +
         "\" y2=\"" + px(ref_y) + "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";

  for (int comp = 0; comp < 3; ++comp) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(traj.samples.size() / stride + 2);
    for (std::size_t i = 0; i < traj.samples.size(); i += stride) {
      const State& s = traj.samples[i];
      const double v = comp == 0 ? s.theta : comp == 1 ? s.psi : s.alpha;
      pts.emplace_back(x.to_px(s.t, kLeft, kRight), y.to_px(v, kBottom, kTop));
    }
    if ((traj.samples.size() - 1) % stride != 0) {
      const State& s = traj.samples.back();
      const double v = comp == 0 ? s.theta : comp == 1 ? s.psi : s.alpha;
      pts.emplace_back(x.to_px(s.t, kLeft, kRight), y.to_px(v, kBottom, kTop));
    }
    append_polyline(svg, pts, kSeriesColor[comp]);
  }

  append_legend(svg, {{"theta", kSeriesColor[0]}, {"psi", kSeriesColor[1]}, {"alpha", kSeriesColor[2]}});
  svg += "</svg>\n";
  return svg;
}

std::string render_sweep_svg(const SweepTable& table) {
  if (table.rows.empty()) throw DomainError("cannot plot an empty sweep");

  double xmin = table.rows.front().time_constant, xmax = xmin;
  double ymin = 0.0, ymax = 0.0;
  for (const SweepRow& r : table.rows) {
    xmin = std::min(xmin, r.time_constant);
    xmax = std::max(xmax, r.time_constant);
    ymax = std::max(ymax, r.predicted_amplitude);
    if (!r.diverged) ymax = std::max(ymax, r.measured_amplitude);
  }
  const Axis x = padded(xmin, xmax);
  const Axis y = padded(ymin, ymax);

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"600\" "
                    "viewBox=\"0 0 960 600\">\n";
  append_frame(svg, x, y, "T");

  std::vector<std::pair<double, double>> measured, predicted;
  for (const SweepRow& r : table.rows) {
    const double xp = x.to_px(r.time_constant, kLeft, kRight);
    predicted.emplace_back(xp, y.to_px(r.predicted_amplitude, kBottom, kTop));
    if (!r.diverged) measured.emplace_back(xp, y.to_px(r.measured_amplitude, kBottom, kTop));
  }
  append_polyline(svg, measured, kSeriesColor[0]);
  append_polyline(svg, predicted, kSeriesColor[1]);
  for (const auto& [xp, yp] : measured) {
    svg += "<circle cx=\"" + px(xp) + "\" cy=\"" + px(yp) + "\" r=\"3.5\" fill=\"" +
           std::string(kSeriesColor[0]) + "\"/>\n";
  }
  for (const auto& [xp, yp] : predicted) {
    svg += "<circle cx=\"" + px(xp) + "\" cy=\"" + px(yp) + "\" r=\"3.5\" fill=\"" +
           std::string(kSeriesColor[1]) + "\"/>\n";
  }

  append_legend(svg, {{"measured", kSeriesColor[0]}, {"predicted", kSeriesColor[1]}});
  svg += "</svg>\n";
  return svg;
}

void write_text_file(const std::string& text, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open for writing: " + path.string());
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw IoError("write failed: " + path.string());
}

}  // namespace tinygan
