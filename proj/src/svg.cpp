#include "cdk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cdk/errors.hpp"

namespace cdk {

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}
}  // namespace

std::string render_svg(const SvgPlot& plot) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const SvgSeries& s : plot.series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmin < xmax)) { xmin = 0; xmax = 1; }
  if (!(ymin < ymax)) { ymin = 0; ymax = 1; }
  const double pad_y = 0.05 * (ymax - ymin);
  ymin -= pad_y;
  ymax += pad_y;

  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = plot.width - ml - mr, ph = plot.height - mt - mb;
  auto px = [&](double x) { return ml + pw * (x - xmin) / (xmax - xmin); };
  auto py = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width
     << "\" height=\"" << plot.height << "\" viewBox=\"0 0 " << plot.width << " "
     << plot.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << plot.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"14\">" << plot.title << "</text>\n";
  os << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\"" << fmt(pw)
     << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    os << "<line x1=\"" << fmt(px(fx)) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
       << fmt(px(fx)) << "\" y2=\"" << fmt(mt + ph + 5) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << fmt(px(fx)) << "\" y=\"" << fmt(mt + ph + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
       << fmt_tick(fx) << "</text>\n";
    os << "<line x1=\"" << fmt(ml - 5) << "\" y1=\"" << fmt(py(fy)) << "\" x2=\""
       << fmt(ml) << "\" y2=\"" << fmt(py(fy)) << "\" stroke=\"#333\"/>\n";
    os << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py(fy) + 3)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
       << fmt_tick(fy) << "</text>\n";
  }
  os << "<text x=\"" << plot.width / 2 << "\" y=\"" << plot.height - 8
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << plot.x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << plot.height / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        "transform=\"rotate(-90 16 " << plot.height / 2 << ")\">"
     << (plot.log_y ? "log10 " + plot.y_label : plot.y_label) << "</text>\n";

  int legend_i = 0;
  for (const SvgSeries& s : plot.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.3\" points=\"";
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
    }
    os << "\"/>\n";
    const double ly = mt + 14 + 14 * legend_i++;
    os << "<line x1=\"" << fmt(ml + 8) << "\" y1=\"" << fmt(ly) << "\" x2=\""
       << fmt(ml + 28) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt(ml + 32) << "\" y=\"" << fmt(ly + 3)
       << "\" font-family=\"sans-serif\" font-size=\"10\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const SvgPlot& plot, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open SVG output file " + path);
  f << render_svg(plot);
}

}  // namespace cdk
