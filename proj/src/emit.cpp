#include <filesystem>
#include <fstream>

#include "aplab/workbench.hpp"

namespace aplab::workbench {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << text;
}

/// shape [a] -> 1 x a, [a, b] -> a rows x b cols, [a, b, c] -> a*b rows x c cols
std::pair<int, int> field_rows_cols(const std::vector<int>& shape) {
  if (shape.size() == 1) return {1, shape[0]};
  if (shape.size() == 2) return {shape[0], shape[1]};
  int rows = 1;
  for (std::size_t a = 0; a + 1 < shape.size(); ++a) rows *= shape[a];
  return {rows, shape.back()};
}

void write_csv(const fs::path& path, const ordered_json& field) {
  auto shape = field.at("shape").get<std::vector<int>>();
  const auto& values = field.at("values");

  std::string text = "point_index";
  for (std::size_t a = 0; a < shape.size(); ++a)
    text += ",coord" + std::to_string(a);
  text += ",value\n";

  std::vector<int> mi(shape.size(), 0);
  char buf[64];
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    text += std::to_string(idx);
    for (int c : mi) text += "," + std::to_string(c);
    std::snprintf(buf, sizeof(buf), ",%.15g\n", values[idx].get<double>());
    text += buf;
    for (std::size_t a = shape.size(); a-- > 0;) {
      if (++mi[a] < shape[a]) break;
      mi[a] = 0;
    }
  }
  write_text(path, text);
}

struct Rgb {
  double r, g, b;
};

/// compact viridis-style ramp
Rgb colormap(double x) {
  static const Rgb stops[] = {{0.267, 0.005, 0.329},
                              {0.283, 0.141, 0.458},
                              {0.254, 0.265, 0.530},
                              {0.164, 0.471, 0.558},
                              {0.128, 0.567, 0.551},
                              {0.135, 0.659, 0.518},
                              {0.267, 0.749, 0.441},
                              {0.478, 0.821, 0.318},
                              {0.741, 0.873, 0.150},
                              {0.993, 0.906, 0.144}};
  x = std::clamp(x, 0.0, 1.0) * 8.999;
  int k = static_cast<int>(x);
  double f = x - k;
  return {stops[k].r + f * (stops[k + 1].r - stops[k].r),
          stops[k].g + f * (stops[k + 1].g - stops[k].g),
          stops[k].b + f * (stops[k + 1].b - stops[k].b)};
}

std::string hex_color(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                static_cast<int>(std::lround(c.r * 255)),
                static_cast<int>(std::lround(c.g * 255)),
                static_cast<int>(std::lround(c.b * 255)));
  return buf;
}

void write_svg(const fs::path& path, const std::string& title,
               const ordered_json& field) {
  auto shape = field.at("shape").get<std::vector<int>>();
  const auto& values = field.at("values");
  auto [rows, cols] = field_rows_cols(shape);
  if (rows <= 0 || cols <= 0 || values.empty()) return;

  double vmin = 1e300, vmax = -1e300;
  for (const auto& v : values) {
    double x = v.get<double>();
    vmin = std::min(vmin, x);
    vmax = std::max(vmax, x);
  }
  double span = vmax - vmin;

  int cell = std::max(2, std::min(24, 720 / std::max(rows, cols)));
  int w = cols * cell, h = rows * cell;
  const int margin = 40, legend_w = 66;

  std::string svg;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                "width=\"%d\" height=\"%d\">\n",
                w + 2 * margin + legend_w, h + 2 * margin);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" "
                "font-size=\"13\">%s</text>\n",
                margin, margin - 12, title.c_str());
  svg += buf;

  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double x = values[static_cast<std::size_t>(r) * cols + c].get<double>();
      double u = span > 0 ? (x - vmin) / span : 0.5;
      std::snprintf(buf, sizeof(buf),
                    "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                    "fill=\"%s\"/>\n",
                    margin + c * cell, margin + (rows - 1 - r) * cell, cell, cell,
                    hex_color(colormap(u)).c_str());
      svg += buf;
    }

  // legend gradient with min/max labels
  const int lx = margin + w + 18, lh = std::max(h, 60);
  for (int i = 0; i < lh; ++i) {
    double u = 1.0 - static_cast<double>(i) / (lh - 1);
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%d\" y=\"%d\" width=\"14\" height=\"2\" fill=\"%s\"/>\n",
                  lx, margin + i, hex_color(colormap(u)).c_str());
    svg += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" "
                "font-size=\"10\">%.6g</text>\n",
                lx + 18, margin + 8, vmax);
  svg += buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-family=\"monospace\" "
                "font-size=\"10\">%.6g</text>\n",
                lx + 18, margin + lh, vmin);
  svg += buf;
  svg += "</svg>\n";
  write_text(path, svg);
}

}  // namespace

void emit_report(const Report& r, const std::string& dir,
                 const std::vector<std::string>& formats) {
  fs::path out(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec && !fs::exists(out))
    throw Error(ErrorCode::IoError, "cannot create output directory '" + dir + "'");

  const std::string id = r.doc.at("scenario").at("id").get<std::string>();
  for (const auto& fmt : formats) {
    if (fmt == "json") {
      write_text(out / (id + ".report.json"), r.to_json());
    } else if (fmt == "csv") {
      for (const auto& [name, field] : r.doc.at("fields").items())
        write_csv(out / (id + "." + name + ".csv"), field);
    } else if (fmt == "svg") {
      for (const auto& [name, field] : r.doc.at("fields").items())
        write_svg(out / (id + "." + name + ".svg"), id + " : " + name, field);
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown format '" + fmt + "'");
    }
  }
}

}  // namespace aplab::workbench
