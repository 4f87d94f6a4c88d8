#include "mpi1d/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mpi1d::svg {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 828.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 480.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

// Fixed two-decimal pixel coordinates: deterministic bytes, sub-pixel accurate.
std::string px(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    if (res.ec != std::errc()) throw std::runtime_error("svg coordinate formatting failed");
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

// Short human label for tick values; %g-style via ostringstream is
// deterministic for the magnitudes ticks take.
std::string tick_label(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

struct Range {
    double lo = 0.0, hi = 1.0;
};

Range nice_range(double lo, double hi) {
    if (!(lo < hi)) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.5;
        return {lo - pad, hi + pad};
    }
    return {lo, hi};
}

// 1-2-5 ladder step covering the span with at most `max_ticks` ticks.
double nice_step(double span, int max_ticks) {
    const double raw = span / max_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) return mag * m;
    }
    return mag * 10.0;
}

} // namespace

std::string render_plot(const std::vector<Series>& series, bool logy, const std::string& title,
                        const std::string& xlabel, const std::string& ylabel) {
    if (series.empty()) throw std::invalid_argument("render_plot: no series");
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) {
            throw std::invalid_argument("render_plot: series '" + s.label + "' length mismatch");
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (logy && !(s.y[i] > 0.0)) continue; // log plots skip non-positive values
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!any) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                any = true;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (!any) throw std::invalid_argument("render_plot: no plottable points");

    const Range xr = nice_range(xmin, xmax);
    Range yr;
    if (logy) {
        yr = {std::floor(std::log10(ymin)), std::ceil(std::log10(ymax))};
        if (yr.lo == yr.hi) yr.hi += 1.0;
    } else {
        yr = nice_range(ymin, ymax);
    }

    const auto sx = [&](double x) {
        return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft);
    };
    const auto sy = [&](double y) {
        const double v = logy ? std::log10(y) : y;
        return kBottom - (v - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
        << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
        << "<text x=\"" << px(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"17\">"
        << escape(title) << "</text>\n";

    // Axis frame.
    out << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\""
        << px(kRight - kLeft) << "\" height=\"" << px(kBottom - kTop)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // X ticks on a 1-2-5 ladder.
    const double xstep = nice_step(xr.hi - xr.lo, 8);
    for (double v = std::ceil(xr.lo / xstep) * xstep; v <= xr.hi + 1e-9 * xstep; v += xstep) {
        const double gx = sx(v);
        out << "<line x1=\"" << px(gx) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(gx)
            << "\" y2=\"" << px(kBottom) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << px(gx) << "\" y=\"" << px(kBottom + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << tick_label(v) << "</text>\n";
    }

    // Y ticks: decades in log mode, 1-2-5 ladder otherwise.
    if (logy) {
        const int lo = static_cast<int>(yr.lo);
        const int hi = static_cast<int>(yr.hi);
        const int every = std::max(1, (hi - lo) / 10);
        for (int e = lo; e <= hi; ++e) {
            const double gy = kBottom - (e - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
            out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(gy) << "\" x2=\"" << px(kRight)
                << "\" y2=\"" << px(gy) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
            if ((e - lo) % every == 0) {
                out << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(gy + 4)
                    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">1e"
                    << e << "</text>\n";
            }
        }
    } else {
        const double ystep = nice_step(yr.hi - yr.lo, 8);
        for (double v = std::ceil(yr.lo / ystep) * ystep; v <= yr.hi + 1e-9 * ystep;
             v += ystep) {
            const double gy = sy(v);
            out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(gy) << "\" x2=\"" << px(kRight)
                << "\" y2=\"" << px(gy) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
                << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(gy + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
                << tick_label(v) << "</text>\n";
        }
    }

    // Axis labels.
    out << "<text x=\"" << px((kLeft + kRight) / 2) << "\" y=\"" << px(kHeight - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
        << escape(xlabel) << "</text>\n"
        << "<text x=\"20\" y=\"" << px((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
           "transform=\"rotate(-90 20 "
        << px((kTop + kBottom) / 2) << ")\">" << escape(ylabel) << "</text>\n";

    // Data polylines.
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (logy && !(s.y[i] > 0.0)) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (!first) out << ' ';
            out << px(sx(s.x[i])) << ',' << px(sy(s.y[i]));
            first = false;
        }
        out << "\"/>\n";
    }

    // Legend, top-right inside the frame.
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = kPalette[k % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const double ly = kTop + 18 + 18 * static_cast<double>(k);
        out << "<line x1=\"" << px(kRight - 150) << "\" y1=\"" << px(ly) << "\" x2=\""
            << px(kRight - 120) << "\" y2=\"" << px(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << px(kRight - 112) << "\" y=\"" << px(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(series[k].label)
            << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

} // namespace mpi1d::svg
