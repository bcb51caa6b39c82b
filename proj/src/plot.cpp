#include "drumhead/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "drumhead/io.hpp"

namespace drumhead {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

// Fixed-point text keeps the SVG short and stable; full precision is pointless in pixels.
std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

void write_line_chart(std::ostream& os, const std::vector<Series>& series, const ChartOptions& opts) {
  if (opts.width < 200 || opts.height < 150) throw std::invalid_argument("write_line_chart: canvas too small");
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("write_line_chart: x and y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] >= 0.0 && s.y[i] <= 1.0))
        throw std::invalid_argument("write_line_chart: value " + format_double(s.y[i]) + " outside [0, 1]");
      if (!std::isfinite(s.x[i]) || (opts.log_x && s.x[i] <= 0.0))
        throw std::invalid_argument("write_line_chart: bad x value " + format_double(s.x[i]));
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
    }
  }
  if (!(x_lo <= x_hi)) {  // nothing to draw
    x_lo = opts.log_x ? 1e-3 : 0.0;
    x_hi = 1.0;
  }
  if (x_lo == x_hi) {
    x_lo = opts.log_x ? x_lo / 2 : x_lo - 0.5;
    x_hi = opts.log_x ? x_hi * 2 : x_hi + 0.5;
  }

  const double left = 64, right = 150, top = 40, bottom = 56;
  const double pw = opts.width - left - right, ph = opts.height - top - bottom;
  auto fx = [&](double x) {
    const double u = opts.log_x ? std::log(x / x_lo) / std::log(x_hi / x_lo) : (x - x_lo) / (x_hi - x_lo);
    return left + u * pw;
  };
  auto fy = [&](double y) { return top + (1.0 - y) * ph; };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
     << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    os << "<text x=\"" << px(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(opts.title) << "</text>\n";

  os << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
     << "<line x1=\"" << px(left) << "\" y1=\"" << px(top + ph) << "\" x2=\"" << px(left + pw) << "\" y2=\""
     << px(top + ph) << "\"/>\n"
     << "<line x1=\"" << px(left) << "\" y1=\"" << px(top) << "\" x2=\"" << px(left) << "\" y2=\"" << px(top + ph)
     << "\"/>\n</g>\n";

  os << "<g class=\"ticks\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = 0.25 * i;
    os << "<line x1=\"" << px(left - 4) << "\" y1=\"" << px(fy(y)) << "\" x2=\"" << px(left + pw) << "\" y2=\""
       << px(fy(y)) << "\" stroke=\"" << (i == 0 ? "black" : "#dddddd") << "\"/>\n"
       << "<text x=\"" << px(left - 8) << "\" y=\"" << px(fy(y) + 4) << "\" text-anchor=\"end\">" << tick_label(y)
       << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double x = opts.log_x ? x_lo * std::pow(x_hi / x_lo, i / 4.0) : x_lo + (x_hi - x_lo) * i / 4.0;
    os << "<line x1=\"" << px(fx(x)) << "\" y1=\"" << px(top + ph) << "\" x2=\"" << px(fx(x)) << "\" y2=\""
       << px(top + ph + 4) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << px(fx(x)) << "\" y=\"" << px(top + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(x) << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << px(left + pw / 2) << "\" y=\"" << px(opts.height - 12.0) << "\" text-anchor=\"middle\">"
     << escape(opts.x_label) << (opts.log_x ? " (log scale)" : "") << "</text>\n"
     << "<text x=\"16\" y=\"" << px(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << px(top + ph / 2) << ")\">" << escape(opts.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << px(fx(s.x[i])) << ',' << px(fy(s.y[i]));
    os << "\"/>\n";
    const double ly = top + 14 + 18.0 * double(k);
    os << "<line x1=\"" << px(left + pw + 14) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(left + pw + 38)
       << "\" y2=\"" << px(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << px(left + pw + 44) << "\" y=\"" << px(ly + 4) << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

std::vector<Series> accumulated_series(const std::vector<AccumulatedRate>& rows) {
  std::map<int, Series> by_n;
  for (const auto& r : rows) {
    Series& s = by_n[r.n_eigs];
    s.label = "N = " + std::to_string(r.n_eigs);
    if (!r.A) continue;
    s.x.push_back(r.d);
    s.y.push_back(*r.A);
  }
  std::vector<Series> out;
  for (auto& [n, s] : by_n) out.push_back(std::move(s));
  return out;
}

std::vector<Series> iso_series(const std::vector<IsoRatio>& rows) {
  if (rows.empty()) return {};
  std::vector<IsoRatio> sorted = rows;
  std::sort(sorted.begin(), sorted.end(), [](const IsoRatio& l, const IsoRatio& r) { return l.n_eigs < r.n_eigs; });
  Series s;
  s.label = "isometric / isospectral";
  for (const auto& r : sorted) {
    if (!r.ratio) continue;
    s.x.push_back(r.n_eigs);
    s.y.push_back(*r.ratio);
  }
  return {s};
}

void plot_experiment(const std::filesystem::path& stats_dir, const std::filesystem::path& out_dir) {
  auto open_in = [](const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw std::invalid_argument("cannot open " + p.string());
    return f;
  };
  auto acc_in = open_in(stats_dir / "stats_accumulated.csv");
  const auto acc = read_accumulated_csv(acc_in);
  auto iso_in = open_in(stats_dir / "stats_iso.csv");
  const auto iso = read_iso_csv(iso_in);

  std::filesystem::create_directories(out_dir);
  auto open_out = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
  };
  {
    auto f = open_out(out_dir / "accumulated.svg");
    write_line_chart(f, accumulated_series(acc),
                     {"Success rate among pairs with d0 <= d", "initial shape distance d", "A(d, N)", true});
  }
  {
    auto f = open_out(out_dir / "iso.svg");
    write_line_chart(f, iso_series(iso), {"Isometric among isospectral outcomes", "N", "ratio", false});
  }
}

}  // namespace drumhead
