#include "tailrisk/experiment/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace tailrisk::experiment {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Range padded() const {
    Range r = *this;
    if (!(r.lo <= r.hi)) return {0.0, 1.0};
    if (r.hi - r.lo < 1e-300) {
      const double w = std::max(0.5, std::abs(r.lo) * 0.1);
      return {r.lo - w, r.hi + w};
    }
    const double pad = 0.05 * (r.hi - r.lo);
    return {r.lo - pad, r.hi + pad};
  }
};

class Canvas {
 public:
  Canvas(const std::string& title, Range x, Range y) : x_(x), y_(y) {
    out_ = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
        "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"11\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
        kWidth, kHeight, kWidth / 2.0, escape(title));
  }

  double px(double x) const {
    return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y_.lo) / (y_.hi - y_.lo) * (kHeight - kTop - kBottom);
  }

  void axes(const std::string& x_label, const std::string& y_label, bool numeric_x) {
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out_ += fmt::format(
        "<path d=\"M{:.2f},{:.2f} L{:.2f},{:.2f} L{:.2f},{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
        x0, y1, x0, y0, x1, y0);
    for (int i = 0; i <= 4; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      const double y = py(v);
      out_ += fmt::format(
          "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>"
          "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
          x0 - 4.0, y, x0, y, x0 - 6.0, y + 4.0, escape(fmt::format("{:.3g}", v)));
      if (numeric_x) {
        const double u = x_.lo + (x_.hi - x_.lo) * i / 4.0;
        const double x = px(u);
        out_ += fmt::format(
            "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>"
            "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
            x, y0, x, y0 + 4.0, x, y0 + 16.0, escape(fmt::format("{:.3g}", u)));
      }
    }
    out_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                        (x0 + x1) / 2.0, kHeight - 14.0, escape(x_label));
    out_ += fmt::format(
        "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
        (y0 + y1) / 2.0, escape(y_label));
  }

  void reference(double v) {
    if (v < y_.lo || v > y_.hi) return;
    out_ += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"gray\" "
        "stroke-dasharray=\"4 3\"/>\n",
        kLeft, py(v), kWidth - kRight, py(v));
  }

  void category_label(double x, const std::string& label) {
    out_ += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x,
                        kHeight - kBottom + 16.0, escape(label));
  }

  std::string& raw() { return out_; }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  Range x_;
  Range y_;
  std::string out_;
};

}  // namespace

std::string box_plot_svg(const std::string& title, const std::vector<BoxEntry>& boxes,
                         const std::string& y_label, std::optional<double> reference) {
  Range y;
  for (const auto& b : boxes) {
    y.add(b.stats.whisker_low);
    y.add(b.stats.whisker_high);
    for (double o : b.stats.outliers) y.add(o);
  }
  if (reference) y.add(*reference);
  const double slots = static_cast<double>(std::max<std::size_t>(boxes.size(), 1));
  Canvas c(title, {0.0, slots}, y.padded());
  c.axes("", y_label, false);
  if (reference) c.reference(*reference);
  const double slot_px = (kWidth - kLeft - kRight) / slots;
  const double half = std::min(30.0, 0.3 * slot_px);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const BoxStats& s = boxes[i].stats;
    const double cx = c.px(static_cast<double>(i) + 0.5);
    std::string& o = c.raw();
    o += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
        "<line x1=\"{0:.2f}\" y1=\"{3:.2f}\" x2=\"{0:.2f}\" y2=\"{4:.2f}\" stroke=\"black\"/>\n",
        cx, c.py(s.whisker_low), c.py(s.q25), c.py(s.q75), c.py(s.whisker_high));
    o += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>"
        "<line x1=\"{0:.2f}\" y1=\"{3:.2f}\" x2=\"{1:.2f}\" y2=\"{3:.2f}\" stroke=\"black\"/>\n",
        cx - half / 2.0, cx + half / 2.0, c.py(s.whisker_low), c.py(s.whisker_high));
    if (s.iqr() > 0.0) {
      o += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#9ecae1\" "
          "stroke=\"black\"/>\n",
          cx - half, c.py(s.q75), 2.0 * half, c.py(s.q25) - c.py(s.q75));
    }
    o += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"#d62728\" "
        "stroke-width=\"2\"/>\n",
        cx - half, cx + half, c.py(s.median));
    for (double v : s.outliers) {
      o += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n",
                       cx, c.py(v));
    }
    c.category_label(cx, boxes[i].label);
  }
  return c.finish();
}

std::string line_plot_svg(const std::string& title, const std::vector<LineSeries>& series,
                          const std::string& x_label, const std::string& y_label,
                          std::optional<double> reference) {
  Range x, y;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      x.add(s.x[i]);
      y.add(s.y[i]);
    }
  }
  if (reference) y.add(*reference);
  Canvas c(title, x.padded(), y.padded());
  c.axes(x_label, y_label, true);
  if (reference) c.reference(*reference);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    std::string d;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) {
        pen_down = false;
        continue;
      }
      d += fmt::format("{}{:.2f},{:.2f} ", pen_down ? "L" : "M", c.px(s.x[i]), c.py(s.y[i]));
      pen_down = true;
    }
    if (!d.empty()) {
      d.pop_back();
      c.raw() += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                             d, colour);
    }
    const double ly = kTop + 14.0 * static_cast<double>(k);
    c.raw() += fmt::format(
        "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" stroke-width=\"2\"/>"
        "<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n",
        kWidth - 170.0, ly, kWidth - 150.0, ly, colour, kWidth - 145.0, ly + 4.0, escape(s.name));
  }
  return c.finish();
}

std::string bar_chart_svg(const std::string& title, const std::vector<Bar>& bars,
                          const std::string& y_label) {
  Range y;
  y.add(0.0);
  for (const auto& b : bars) {
    y.add(b.value + std::max(0.0, b.error));
    y.add(b.value - std::max(0.0, b.error));
  }
  const double slots = static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  Canvas c(title, {0.0, slots}, y.padded());
  c.axes("", y_label, false);
  const double slot_px = (kWidth - kLeft - kRight) / slots;
  const double half = std::min(30.0, 0.35 * slot_px);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const Bar& b = bars[i];
    const double cx = c.px(static_cast<double>(i) + 0.5);
    const double top = c.py(std::max(b.value, 0.0));
    const double base = c.py(std::min(b.value, 0.0));
    c.raw() += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
        cx - half, top, 2.0 * half, base - top, kPalette[i % std::size(kPalette)]);
    if (b.error > 0.0) {
      c.raw() += fmt::format(
          "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx,
          c.py(b.value - b.error), c.py(b.value + b.error));
    }
    c.category_label(cx, b.label);
  }
  return c.finish();
}

}  // namespace tailrisk::experiment
