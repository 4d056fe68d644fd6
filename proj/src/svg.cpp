#include "irissr/cli/svg.hpp"

#include <cmath>
#include <fstream>

namespace irissr::cli {

namespace {

constexpr int kWidth = 640, kHeight = 440;
constexpr int kMarginL = 60, kMarginR = 20, kMarginT = 40, kMarginB = 50;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void open_svg(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    // axes
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << kHeight - kMarginB << "\" x2=\""
        << kWidth - kMarginR << "\" y2=\"" << kHeight - kMarginB
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << kMarginT << "\" x2=\"" << kMarginL
        << "\" y2=\"" << kHeight - kMarginB << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

} // namespace

void write_histogram_svg(const eval::ScoreHistogram& hist, const std::string& title,
                         const std::filesystem::path& path) {
    std::ofstream out(path);
    require(out.good(), "cannot write svg: " + path.string());
    open_svg(out, title);

    double max_density = 1e-12;
    for (double d : hist.genuine_density) max_density = std::max(max_density, d);
    for (double d : hist.impostor_density) max_density = std::max(max_density, d);

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    const size_t bins = hist.genuine_density.size();
    const double bar_w = plot_w / double(bins);

    auto bars = [&](const std::vector<double>& density, const char* color) {
        for (size_t b = 0; b < bins; ++b) {
            if (density[b] <= 0) continue;
            double h = density[b] / max_density * plot_h;
            out << "<rect x=\"" << fmt(kMarginL + b * bar_w) << "\" y=\""
                << fmt(kHeight - kMarginB - h) << "\" width=\"" << fmt(bar_w) << "\" height=\""
                << fmt(h) << "\" fill=\"" << color << "\" fill-opacity=\"0.5\"/>\n";
        }
    };
    bars(hist.genuine_density, "#2166ac");
    bars(hist.impostor_density, "#b2182b");

    out << "<text x=\"" << kMarginL << "\" y=\"" << kHeight - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << fmt(hist.edges.front())
        << "</text>\n";
    out << "<text x=\"" << kWidth - kMarginR << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
        << fmt(hist.edges.back()) << "</text>\n";
    out << "<text x=\"" << kWidth - kMarginR - 150 << "\" y=\"" << kMarginT + 10
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#2166ac\">genuine</text>\n";
    out << "<text x=\"" << kWidth - kMarginR - 150 << "\" y=\"" << kMarginT + 26
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#b2182b\">impostor</text>\n";
    out << "</svg>\n";
}

void write_roc_svg(const std::vector<eval::RocPoint>& roc, const std::string& title,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    require(out.good(), "cannot write svg: " + path.string());
    open_svg(out, title);

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    out << "<polyline fill=\"none\" stroke=\"#2166ac\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : roc)
        out << fmt(kMarginL + p.far * plot_w) << ',' << fmt(kHeight - kMarginB - p.frr * plot_h)
            << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">FAR</text>\n";
    out << "<text x=\"18\" y=\"" << kHeight / 2
        << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 18 "
        << kHeight / 2 << ")\">FRR</text>\n";
    out << "</svg>\n";
}

} // namespace irissr::cli
