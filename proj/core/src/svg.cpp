#include "nlkpp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nlkpp {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
  void pad() {
    if (!valid()) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double m = 0.04 * (hi - lo);
      lo -= m;
      hi += m;
    }
  }
};

// 4-6 round tick positions covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span;
       v += step)
    out.push_back(v);
  return out;
}

}  // namespace

std::string render_svg(const SvgChart& chart) {
  const double ml = 64, mr = 16, mt = 34, mb = 46;  // margins
  const double pw = chart.width - ml - mr;          // plot area
  const double ph = chart.height - mt - mb;

  const auto tx = [&](double v) { return chart.log_x ? std::log10(v) : v; };
  const auto ty = [&](double v) { return chart.log_y ? std::log10(v) : v; };
  const auto usable_x = [&](double v) {
    return std::isfinite(v) && (!chart.log_x || v > 0.0);
  };
  const auto usable_y = [&](double v) {
    return std::isfinite(v) && (!chart.log_y || v > 0.0);
  };

  Range rx, ry;
  for (const SvgSeries& s : chart.series) {
    const size_t n = std::min(s.x.size(), s.y.size());
    for (size_t i = 0; i < n; ++i) {
      if (!usable_x(s.x[i]) || !usable_y(s.y[i])) continue;
      rx.include(tx(s.x[i]));
      ry.include(ty(s.y[i]));
    }
  }
  rx.pad();
  ry.pad();

  const auto px = [&](double v) { return ml + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  const auto py = [&](double v) { return mt + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width
     << "\" height=\"" << chart.height << "\" viewBox=\"0 0 " << chart.width
     << ' ' << chart.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << chart.width / 2 << "\" y=\"20\" font-family=\"monospace\""
     << " font-size=\"14\" text-anchor=\"middle\">" << escape(chart.title)
     << "</text>\n";

  // Axes frame.
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
     << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  for (double v : ticks(rx.lo, rx.hi)) {
    const double x = px(v);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << mt + ph << "\" x2=\""
       << num(x) << "\" y2=\"" << mt + ph + 5
       << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 18
       << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">"
       << num(chart.log_x ? std::pow(10.0, v) : v) << "</text>\n";
  }
  for (double v : ticks(ry.lo, ry.hi)) {
    const double y = py(v);
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << ml
       << "\" y2=\"" << num(y) << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << num(y + 4)
       << "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">"
       << num(chart.log_y ? std::pow(10.0, v) : v) << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << chart.height - 8
     << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
     << escape(chart.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\""
     << " transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">"
     << escape(chart.y_label) << "</text>\n";

  int legend_row = 0;
  for (const SvgSeries& s : chart.series) {
    std::ostringstream pts;
    bool open = false;
    const size_t n = std::min(s.x.size(), s.y.size());
    for (size_t i = 0; i < n; ++i) {
      if (!usable_x(s.x[i]) || !usable_y(s.y[i])) {
        if (open) {
          os << "<polyline fill=\"none\" stroke=\"" << s.color
             << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
          pts.str("");
          open = false;
        }
        continue;
      }
      pts << num(px(tx(s.x[i]))) << ',' << num(py(ty(s.y[i]))) << ' ';
      open = true;
    }
    if (open)
      os << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";

    const double lx = ml + 10, lyy = mt + 14 + 16 * legend_row++;
    os << "<line x1=\"" << lx << "\" y1=\"" << lyy - 4 << "\" x2=\"" << lx + 22
       << "\" y2=\"" << lyy - 4 << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << lx + 28 << "\" y=\"" << lyy
       << "\" font-family=\"monospace\" font-size=\"11\">" << escape(s.label)
       << "</text>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace nlkpp
