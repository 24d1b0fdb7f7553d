#include "smasim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smasim/errors.hpp"
#include "smasim/text_io.hpp"

namespace smasim {

namespace {

struct Range {
    double lo = 0.0, hi = 1.0;
};

Range nice_range(double lo, double hi) {
    if (!(hi > lo)) {
        const double pad = std::abs(lo) > 0 ? 0.1 * std::abs(lo) : 1.0;
        return {lo - pad, hi + pad};
    }
    const double pad = 0.06 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::vector<double> linear_ticks(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step)
        ticks.push_back(t);
    return ticks;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
    double xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw parameter_error("write_svg_plot: series x/y lengths differ");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double e = i < s.yerr.size() ? s.yerr[i] : 0.0;
            double ylow = s.y[i] - e, yhigh = s.y[i] + e;
            if (spec.log_y) {
                if (!(s.y[i] > 0.0)) throw parameter_error("write_svg_plot: log axis needs y > 0");
                ylow = std::max(ylow, s.y[i] * 1e-3);
            }
            if (!any) {
                xlo = xhi = s.x[i];
                ylo = ylow;
                yhi = yhigh;
                any = true;
            } else {
                xlo = std::min(xlo, s.x[i]);
                xhi = std::max(xhi, s.x[i]);
                ylo = std::min(ylo, ylow);
                yhi = std::max(yhi, yhigh);
            }
        }
    }
    if (!any) throw parameter_error("write_svg_plot: no data");

    const auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
    Range xr = nice_range(xlo, xhi);
    Range yr = nice_range(ty(ylo), ty(yhi));

    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = spec.width - ml - mr;
    const double ph = spec.height - mt - mb;
    const auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto py = [&](double y) { return mt + ph - (ty(y) - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!spec.comment.empty()) svg << "<!-- " << spec.comment << " -->\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << spec.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << spec.title << "</text>\n";

    // Axes box
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (double t : linear_ticks(xr.lo, xr.hi)) {
        const double x = px(t);
        svg << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
            << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
            << "</text>\n";
    }
    for (double t : linear_ticks(yr.lo, yr.hi)) {
        const double y = mt + ph - (t - yr.lo) / (yr.hi - yr.lo) * ph;
        const double label = spec.log_y ? std::pow(10.0, t) : t;
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
            << "\" stroke=\"#333\"/>\n";
        svg << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << ml + pw << "\" y2=\"" << y
            << "\" stroke=\"#eee\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(label)
            << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << spec.height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << spec.xlabel
        << "</text>\n";
    svg << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
        << mt + ph / 2 << ")\">" << spec.ylabel << "</text>\n";

    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.yerr.size(); ++i) {
            if (s.yerr[i] <= 0.0) continue;
            double lo = s.y[i] - s.yerr[i];
            if (spec.log_y) lo = std::max(lo, s.y[i] * 1e-3);
            const double x = px(s.x[i]);
            svg << "<line x1=\"" << x << "\" y1=\"" << py(lo) << "\" x2=\"" << x << "\" y2=\""
                << py(s.y[i] + s.yerr[i]) << "\" stroke=\"" << s.color << "\"/>\n";
            svg << "<line x1=\"" << x - 4 << "\" y1=\"" << py(lo) << "\" x2=\"" << x + 4
                << "\" y2=\"" << py(lo) << "\" stroke=\"" << s.color << "\"/>\n";
            svg << "<line x1=\"" << x - 4 << "\" y1=\"" << py(s.y[i] + s.yerr[i]) << "\" x2=\""
                << x + 4 << "\" y2=\"" << py(s.y[i] + s.yerr[i]) << "\" stroke=\"" << s.color
                << "\"/>\n";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        svg << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                svg << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
                    << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }

    double ly = mt + 14;
    for (const auto& s : series) {
        svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << ml + pw - 130 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw - 125 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label << "</text>\n";
        ly += 16;
    }
    svg << "</svg>\n";
    write_text_file(path, svg.str());
}

}
