#pragma once

// CSV and SVG serialization.  Numbers are written with std::to_chars, which
// is locale-independent, using 9 significant digits.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "handoff/errors.hpp"
#include "handoff/experiments.hpp"

namespace handoff::io {

inline constexpr int kSignificantDigits = 9;

inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general,
                                 kSignificantDigits);
  return std::string(buf, res.ptr);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << fields[i];
  }
  os << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  write_csv_row(os, header);
  std::vector<std::string> fields;
  for (const auto& row : rows) {
    fields.clear();
    for (double x : row) fields.push_back(format_number(x));
    write_csv_row(os, fields);
  }
}

// Provenance lines start with '#' and precede the header.
inline void write_csv(std::ostream& os, const SweepTable& table, bool with_provenance = false) {
  if (with_provenance) {
    os << "# spec: " << table.provenance.spec << '\n';
    if (table.provenance.seed) os << "# seed: " << *table.provenance.seed << '\n';
    os << "# version: " << table.provenance.version << '\n';
  }
  write_csv(os, table.columns, table.rows);
}

/// Parses numeric CSV as written above.  Lines starting with '#' are skipped.
inline CsvTable read_csv(std::string_view text) {
  CsvTable out;
  bool have_header = false;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      for (auto f : fields) out.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != out.header.size()) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(out.header.size()) + " fields");
    }
    std::vector<double> row;
    for (auto f : fields) {
      double x = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), x);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        throw ParseError("csv line " + std::to_string(line_no) + ": bad number '" +
                         std::string(f) + "'");
      }
      row.push_back(x);
    }
    out.rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("csv has no header");
  return out;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
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

inline std::string svg_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace detail

/// Static line chart: one polyline per series, labelled axes, legend.
inline void write_svg(std::ostream& os, const SweepTable& table) {
  constexpr double width = 640.0, height = 420.0;
  constexpr double left = 70.0, right = 170.0, top = 30.0, bottom = 55.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  for (const auto& row : table.rows) {
    x_lo = std::min(x_lo, row[table.x_column]);
    x_hi = std::max(x_hi, row[table.x_column]);
  }
  if (table.rows.empty()) x_lo = 0.0, x_hi = 1.0;
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  const double y_lo = 0.0, y_hi = 1.0;  // probabilities

  auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };
  using detail::svg_number;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
     << "\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<desc>" << detail::xml_escape(table.provenance.spec) << " | "
     << detail::xml_escape(table.provenance.version) << "</desc>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<g stroke=\"black\" fill=\"none\">\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
     << "\" y2=\"" << top + plot_h << "\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << top + plot_h << "\"/>\n";
  os << "</g>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = x_lo + (x_hi - x_lo) * k / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * k / 5.0;
    os << "<line x1=\"" << svg_number(px(xv)) << "\" y1=\"" << top + plot_h << "\" x2=\""
       << svg_number(px(xv)) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << svg_number(px(xv)) << "\" y=\"" << top + plot_h + 18
       << "\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
    os << "<line x1=\"" << left - 5 << "\" y1=\"" << svg_number(py(yv)) << "\" x2=\"" << left
       << "\" y2=\"" << svg_number(py(yv)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 8 << "\" y=\"" << svg_number(py(yv) + 4)
       << "\" text-anchor=\"end\">" << format_number(yv) << "</text>\n";
  }
  os << "<text x=\"" << svg_number(left + plot_w / 2) << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\">" << detail::xml_escape(table.columns[table.x_column])
     << "</text>\n";
  os << "<text transform=\"translate(18," << svg_number(top + plot_h / 2)
     << ") rotate(-90)\" text-anchor=\"middle\">"
     << detail::xml_escape(table.columns[table.y_column]) << "</text>\n";
  os << "</g>\n";

  for (std::size_t s = 0; s < table.series_labels.size(); ++s) {
    const char* color = palette[s % std::size(palette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (const auto& row : table.rows) {
      if (static_cast<std::size_t>(row[0]) != s) continue;
      os << (first ? "" : " ") << svg_number(px(row[table.x_column])) << ','
         << svg_number(py(row[table.y_column]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = top + 12.0 + 16.0 * static_cast<double>(s);
    os << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\""
       << left + plot_w + 32 << "\" y2=\"" << ly << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly + 4
       << "\" font-family=\"sans-serif\" font-size=\"11\">"
       << detail::xml_escape(table.series_labels[s]) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace handoff::io
