#include "netsub/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netsub/error.hpp"

namespace netsub {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg_chart(const std::vector<SvgSeries>& series, const SvgChartOptions& opts) {
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double pw = opts.width - left - right, ph = opts.height - top - bottom;
  auto tx = [&](double x) { return opts.log_x ? std::log10(x) : x; };

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((opts.log_x && s.x[i] <= 0) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i])), x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, s.y[i]), y1 = std::max(y1, s.y[i]);
    }
  }
  if (std::isfinite(opts.reference_y)) y0 = std::min(y0, opts.reference_y), y1 = std::max(y1, opts.reference_y);
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << opts.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(opts.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks: decades on a log axis, 5 even ticks otherwise
  if (opts.log_x) {
    for (int e = int(std::ceil(x0)); e <= int(std::floor(x1)); ++e) {
      const double x = left + (e - x0) / (x1 - x0) * pw;
      os << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
         << "\" stroke=\"black\"/><text x=\"" << x << "\" y=\"" << top + ph + 18
         << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
    }
  } else {
    for (int k = 0; k <= 4; ++k) {
      const double v = x0 + (x1 - x0) * k / 4, x = left + pw * k / 4;
      os << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << v << "</text>\n";
    }
  }
  for (int k = 0; k <= 4; ++k) {
    const double v = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">" << v << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << opts.height - 10 << "\" text-anchor=\"middle\">"
     << escape(opts.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << top + ph / 2 << ")\">" << escape(opts.y_label) << "</text>\n";
  if (std::isfinite(opts.reference_y)) {
    os << "<line x1=\"" << left << "\" y1=\"" << py(opts.reference_y) << "\" x2=\"" << left + pw << "\" y2=\""
       << py(opts.reference_y) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if ((opts.log_x && s.x[i] <= 0) || !std::isfinite(s.y[i])) continue;
      os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << left + pw - 8 << "\" y=\"" << top + 16 + 16 * k << "\" text-anchor=\"end\" fill=\""
       << color << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg_chart(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                     const SvgChartOptions& opts) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot open " + path.string() + " for writing");
  os << render_svg_chart(series, opts);
}

}  // namespace netsub
