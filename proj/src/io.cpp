#include "diagent/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

#include "diagent/error.hpp"

namespace diagent::io {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string fixed(double value, int digits = 3) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, digits);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw Error(ErrorKind::InvalidArgument, "CSV row width does not match header");
  rows_.push_back(std::move(cells));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  const auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp =
      path.parent_path() /
      (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move output into " + path.string());
  }
}

std::string bitstring(std::uint32_t s, int L) {
  std::string out(static_cast<std::size_t>(L), '0');
  for (int b = 0; b < L; ++b)
    if (s >> b & 1u) out[b] = '1';
  return out;
}

std::string gtable_csv(const CorrelationTable& table) {
  CsvTable csv({"l", "g_l"});
  for (int l = -table.l_max(); l <= table.l_max(); ++l)
    csv.row({std::to_string(l), format_double(table[l])});
  return csv.str();
}

std::string probs_csv(const DiagonalDistribution& dist) {
  CsvTable csv({"bitstring", "probability"});
  const auto p = dist.probabilities();
  for (std::uint32_t s = 0; s < p.size(); ++s)
    csv.row({bitstring(s, dist.size()), format_double(p[s])});
  return csv.str();
}

std::string entropy_csv(const EntropyCurve& curve) {
  CsvTable csv({"L", "DE_bits", "EE_bits", "C_bits"});
  const bool with_ee = curve.ee.size() == curve.sizes.size();
  for (std::size_t i = 0; i < curve.sizes.size(); ++i)
    csv.row({std::to_string(curve.sizes[i]), format_double(curve.de[i]),
             with_ee ? format_double(curve.ee[i]) : "nan",
             with_ee ? format_double(curve.coherence[i]) : "nan"});
  return csv.str();
}

std::string fit_csv(double gamma, double lambda, const ScalingFit& fit) {
  CsvTable csv({"gamma", "lambda", "a", "b", "c", "rms", "L_min", "L_max"});
  csv.row({format_double(gamma), format_double(lambda), format_double(fit.a),
           format_double(fit.b), format_double(fit.c),
           format_double(fit.rms_residual), std::to_string(fit.fit_range.L_min),
           std::to_string(fit.fit_range.L_max)});
  return csv.str();
}

std::string fit_structured(double gamma, double lambda, const ScalingFit& fit) {
  // non-finite values serialize as null
  nlohmann::ordered_json j;
  j["gamma"] = gamma;
  j["lambda"] = lambda;
  j["a"] = fit.a;
  j["b"] = fit.b;
  j["c"] = fit.c;
  j["rms"] = fit.rms_residual;
  j["L_min"] = fit.fit_range.L_min;
  j["L_max"] = fit.fit_range.L_max;
  return j.dump() + "\n";
}

namespace {

std::vector<std::string> sweep_row(const SweepResult& r, std::size_t i) {
  return {format_double(r.lambda[i]), format_double(r.a[i]),
          format_double(r.b[i]),      format_double(r.c[i]),
          format_double(r.da[i]),     format_double(r.db[i]),
          format_double(r.dc[i]),     format_double(r.rms[i])};
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  CsvTable csv({"lambda", "a", "b", "c", "da", "db", "dc", "rms"});
  for (std::size_t i = 0; i < result.lambda.size(); ++i)
    csv.row(sweep_row(result, i));
  return csv.str();
}

std::string grid_csv(std::span<const SweepResult> results) {
  CsvTable csv({"gamma", "lambda", "a", "b", "c", "da", "db", "dc", "rms"});
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.lambda.size(); ++i) {
      auto cells = sweep_row(r, i);
      cells.insert(cells.begin(), format_double(r.gamma));
      csv.row(std::move(cells));
    }
  }
  return csv.str();
}

std::string boundary_csv(std::span<const BoundaryPoint> points) {
  CsvTable csv({"gamma", "lambda_star", "residual_c"});
  for (const auto& p : points)
    csv.row({format_double(p.gamma), format_double(p.lambda_star),
             format_double(p.residual_c)});
  return csv.str();
}

// --- SVG ---------------------------------------------------------------

namespace {

constexpr std::array<const char*, 6> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

// One plotting panel placed at (x0, y0) in the document.
class Panel {
 public:
  Panel(double x0, double y0, double w, double h, Range xr, Range yr)
      : x0_(x0), y0_(y0), w_(w), h_(h), xr_(xr), yr_(yr) {}

  double sx(double x) const { return x0_ + (x - xr_.lo) / (xr_.hi - xr_.lo) * w_; }
  double sy(double y) const {
    return y0_ + h_ - (y - yr_.lo) / (yr_.hi - yr_.lo) * h_;
  }

  void frame(std::string& out, const std::string& xlabel,
             const std::string& ylabel) const {
    out += "<rect x=\"" + fixed(x0_) + "\" y=\"" + fixed(y0_) + "\" width=\"" +
           fixed(w_) + "\" height=\"" + fixed(h_) +
           "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      const double xv = xr_.lo + t * (xr_.hi - xr_.lo) / 4.0;
      const double yv = yr_.lo + t * (yr_.hi - yr_.lo) / 4.0;
      out += "<text x=\"" + fixed(sx(xv)) + "\" y=\"" + fixed(y0_ + h_ + 14) +
             "\" font-size=\"10\" text-anchor=\"middle\">" + fixed(xv, 2) +
             "</text>\n";
      out += "<text x=\"" + fixed(x0_ - 4) + "\" y=\"" + fixed(sy(yv) + 3) +
             "\" font-size=\"10\" text-anchor=\"end\">" + fixed(yv, 3) +
             "</text>\n";
    }
    out += "<text x=\"" + fixed(x0_ + w_ / 2) + "\" y=\"" +
           fixed(y0_ + h_ + 30) + "\" font-size=\"12\" text-anchor=\"middle\">" +
           xlabel + "</text>\n";
    out += "<text x=\"" + fixed(x0_ + 4) + "\" y=\"" + fixed(y0_ + 14) +
           "\" font-size=\"12\">" + ylabel + "</text>\n";
  }

  // Polyline broken at non-finite values.
  void line(std::string& out, std::span<const double> xs,
            std::span<const double> ys, const char* colour) const {
    std::string pts;
    const auto flush = [&] {
      if (!pts.empty())
        out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
        flush();
        continue;
      }
      if (!pts.empty()) pts += ' ';
      pts += fixed(sx(xs[i])) + "," + fixed(sy(ys[i]));
    }
    flush();
  }

  void dots(std::string& out, std::span<const double> xs,
            std::span<const double> ys, const char* colour) const {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) continue;
      out += "<circle cx=\"" + fixed(sx(xs[i])) + "\" cy=\"" + fixed(sy(ys[i])) +
             "\" r=\"3\" fill=\"" + colour + "\"/>\n";
    }
  }

 private:
  double x0_, y0_, w_, h_;
  Range xr_, yr_;
};

std::string document(double width, double height, const std::string& body) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         fixed(width, 0) + "\" height=\"" + fixed(height, 0) +
         "\" viewBox=\"0 0 " + fixed(width, 0) + " " + fixed(height, 0) +
         "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" "
         "fill=\"#fff\"/>\n" +
         body + "</svg>\n";
}

}  // namespace

std::string entropy_svg(const EntropyCurve& curve, const ScalingFit& fit) {
  if (curve.sizes.empty())
    throw Error(ErrorKind::InvalidArgument, "nothing to plot");
  std::vector<double> xs(curve.sizes.begin(), curve.sizes.end());
  std::vector<double> fine_x, fine_y;
  const double x_lo = xs.front(), x_hi = xs.back();
  for (int i = 0; i <= 200; ++i) {
    const double L = x_lo + (x_hi - x_lo) * i / 200.0;
    fine_x.push_back(L);
    fine_y.push_back(fit.a * L + fit.b * std::log2(L) + fit.c);
  }
  Range xr, yr;
  for (double x : xs) xr.add(x);
  for (double y : curve.de) yr.add(y);
  for (double y : fine_y) yr.add(y);
  xr.finish();
  yr.finish();
  const Panel panel(70, 30, 460, 320, xr, yr);
  std::string body;
  panel.frame(body, "L", "DE (bits)");
  panel.line(body, fine_x, fine_y, kPalette[1]);
  panel.dots(body, xs, curve.de, kPalette[0]);
  body += "<text x=\"300\" y=\"20\" font-size=\"12\" text-anchor=\"middle\">"
          "gamma=" + fixed(curve.params.gamma(), 3) +
          " lambda=" + fixed(curve.params.lambda(), 3) + " a=" + fixed(fit.a, 4) +
          " b=" + fixed(fit.b, 4) + " c=" + fixed(fit.c, 4) + "</text>\n";
  return document(560, 400, body);
}

std::string sweep_svg(std::span<const SweepResult> results) {
  if (results.empty())
    throw Error(ErrorKind::InvalidArgument, "nothing to plot");
  const std::array<const char*, 3> names = {"a", "b", "c"};
  std::string body;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 2; ++col) {
      Range xr, yr;
      for (const auto& r : results) {
        const auto& ys = col == 0 ? (row == 0 ? r.a : row == 1 ? r.b : r.c)
                                  : (row == 0 ? r.da : row == 1 ? r.db : r.dc);
        for (double x : r.lambda) xr.add(x);
        for (double y : ys) yr.add(y);
      }
      xr.finish();
      yr.finish();
      const Panel panel(80 + col * 400, 30 + row * 250, 300, 180, xr, yr);
      const std::string label = col == 0 ? std::string(names[row])
                                         : "d" + std::string(names[row]) + "/dlambda";
      panel.frame(body, "lambda", label);
      for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        const auto& ys = col == 0 ? (row == 0 ? r.a : row == 1 ? r.b : r.c)
                                  : (row == 0 ? r.da : row == 1 ? r.db : r.dc);
        panel.line(body, r.lambda, ys, kPalette[k % kPalette.size()]);
      }
    }
  }
  for (std::size_t k = 0; k < results.size(); ++k)
    body += "<text x=\"" + fixed(80 + 110.0 * k) +
            "\" y=\"18\" font-size=\"12\" fill=\"" +
            kPalette[k % kPalette.size()] + "\">gamma=" +
            fixed(results[k].gamma, 2) + "</text>\n";
  return document(820, 780, body);
}

std::string boundary_svg(std::span<const BoundaryPoint> points) {
  if (points.empty())
    throw Error(ErrorKind::InvalidArgument, "nothing to plot");
  std::vector<double> cx, cy;
  for (int i = 0; i <= 200; ++i) {
    const double lambda = i / 200.0;
    cx.push_back(lambda);
    cy.push_back(std::sqrt(std::max(0.0, 1.0 - lambda * lambda)));
  }
  std::vector<double> px, py;
  for (const auto& p : points) {
    px.push_back(p.lambda_star);
    py.push_back(p.gamma);
  }
  Range xr, yr;
  xr.add(0.0);
  xr.add(1.0);
  yr.add(0.0);
  yr.add(1.0);
  xr.finish();
  yr.finish();
  const Panel panel(70, 30, 400, 400, xr, yr);
  std::string body;
  panel.frame(body, "lambda", "gamma");
  panel.line(body, cx, cy, kPalette[1]);
  panel.dots(body, px, py, kPalette[0]);
  return document(500, 480, body);
}

}  // namespace diagent::io
