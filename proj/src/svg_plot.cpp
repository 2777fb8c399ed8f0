// SPDX-License-Identifier: Apache-2.0

#include "feec/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "feec/error.hpp"

namespace feec
{

namespace
{

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 90.0, kRight = 200.0, kTop = 50.0, kBottom = 70.0;
constexpr const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b"};

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Axes
{
  double x_lo, x_hi, y_lo, y_hi;  // decades (log10)

  double px(double x) const
  {
    return kLeft + (std::log10(x) - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight);
  }
  double py(double y) const
  {
    return kHeight - kBottom - (std::log10(y) - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

}  // namespace

void write_svg(std::ostream &os, const LogLogPlot &plot)
{
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto &s : plot.series)
  {
    if (s.x.size() != s.y.size())
    {
      throw UsageError("plot series '" + s.name + "' has mismatched lengths");
    }
    for (std::size_t i = 0; i < s.x.size(); i++)
    {
      if (s.x[i] > 0.0 && s.y[i] > 0.0)
      {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  if (!(xmin < xmax))
  {
    xmin = xmin > 0.0 && std::isfinite(xmin) ? xmin / 2 : 0.1;
    xmax = xmin * 4;
  }
  if (!(ymin <= ymax))
  {
    ymin = 0.1;
    ymax = 1.0;
  }
  const Axes ax{std::floor(std::log10(xmin)), std::ceil(std::log10(xmax)),
                std::floor(std::log10(ymin)),
                std::max(std::ceil(std::log10(ymax)), std::floor(std::log10(ymin)) + 1)};

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
        "viewBox=\"0 0 800 600\">\n"
     << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kWidth / 2 - kRight / 2 + kLeft / 2) << "\" y=\"30\" "
     << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << escape(plot.title) << "</text>\n";

  // Decade grid and tick labels.
  for (int d = static_cast<int>(ax.x_lo); d <= static_cast<int>(ax.x_hi); d++)
  {
    const double x = ax.px(std::pow(10.0, d));
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(kHeight - kBottom) << "\" stroke=\"#ddd\"/>\n"
       << "<text x=\"" << num(x) << "\" y=\"" << num(kHeight - kBottom + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">1e" << d
       << "</text>\n";
  }
  for (int d = static_cast<int>(ax.y_lo); d <= static_cast<int>(ax.y_hi); d++)
  {
    const double y = ax.py(std::pow(10.0, d));
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
       << num(kWidth - kRight) << "\" y2=\"" << num(y) << "\" stroke=\"#ddd\"/>\n"
       << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e" << d
       << "</text>\n";
  }
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\""
     << num(kWidth - kLeft - kRight) << "\" height=\"" << num(kHeight - kTop - kBottom)
     << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 25)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << escape(plot.x_label) << "</text>\n"
     << "<text x=\"25\" y=\"" << num((kTop + kHeight - kBottom) / 2)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
        "transform=\"rotate(-90 25 "
     << num((kTop + kHeight - kBottom) / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

  os << "<defs><clipPath id=\"area\"><rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop)
     << "\" width=\"" << num(kWidth - kLeft - kRight) << "\" height=\""
     << num(kHeight - kTop - kBottom) << "\"/></clipPath></defs>\n";

  double legend_y = kTop + 10;
  auto legend = [&](const std::string &label, const char *color, bool dashed) {
    os << "<line x1=\"" << num(kWidth - kRight + 15) << "\" y1=\"" << num(legend_y)
       << "\" x2=\"" << num(kWidth - kRight + 40) << "\" y2=\"" << num(legend_y)
       << "\" stroke=\"" << color << "\" stroke-width=\"2\""
       << (dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
       << "<text x=\"" << num(kWidth - kRight + 46) << "\" y=\"" << num(legend_y + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(label) << "</text>\n";
    legend_y += 20;
  };

  for (const auto &g : plot.guides)
  {
    const double xa = std::pow(10.0, ax.x_lo), xb = std::pow(10.0, ax.x_hi);
    const double ya = g.y0 * std::pow(xa / g.x0, g.slope);
    const double yb = g.y0 * std::pow(xb / g.x0, g.slope);
    os << "<line clip-path=\"url(#area)\" x1=\"" << num(ax.px(xa)) << "\" y1=\"" << num(ax.py(ya))
       << "\" x2=\"" << num(ax.px(xb)) << "\" y2=\"" << num(ax.py(yb))
       << "\" stroke=\"#777\" stroke-dasharray=\"6 4\"/>\n";
    char label[48];
    std::snprintf(label, sizeof label, "slope %g", g.slope);
    legend(label, "#777", true);
  }
  for (std::size_t i = 0; i < plot.series.size(); i++)
  {
    const auto &s = plot.series[i];
    const char *color = kColors[i % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < s.x.size(); j++)
    {
      if (s.x[j] > 0.0 && s.y[j] > 0.0)
      {
        os << num(ax.px(s.x[j])) << ',' << num(ax.py(s.y[j])) << ' ';
      }
    }
    os << "\"/>\n";
    for (std::size_t j = 0; j < s.x.size(); j++)
    {
      if (s.x[j] > 0.0 && s.y[j] > 0.0)
      {
        os << "<circle cx=\"" << num(ax.px(s.x[j])) << "\" cy=\"" << num(ax.py(s.y[j]))
           << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    legend(s.name, color, false);
  }
  os << "</svg>\n";
}

LogLogPlot convergence_plot(const std::vector<ErrorRecord> &records, int k,
                            const std::string &title)
{
  LogLogPlot plot;
  plot.title = title;
  for (auto column : kErrorColumns)
  {
    PlotSeries s;
    s.name = std::string(column);
    for (const auto &r : records)
    {
      if (const auto v = error_value(r, column))
      {
        s.x.push_back(r.h_max);
        s.y.push_back(*v);
      }
    }
    if (!s.x.empty())
    {
      plot.series.push_back(std::move(s));
    }
  }
  if (!records.empty() && !plot.series.empty())
  {
    // Anchor guides at the coarsest level, below the smallest error there.
    double y0 = std::numeric_limits<double>::infinity();
    for (const auto &s : plot.series)
    {
      if (s.y.front() > 0.0)
      {
        y0 = std::min(y0, s.y.front());
      }
    }
    if (std::isfinite(y0))
    {
      plot.guides.push_back({k - 0.5, records.front().h_max, 0.5 * y0});
      plot.guides.push_back({static_cast<double>(k), records.front().h_max, 0.25 * y0});
    }
  }
  return plot;
}

}  // namespace feec
