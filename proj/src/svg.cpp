#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "ph/io.hpp"
#include "ph/pipeline.hpp"

namespace ph {

namespace {

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.2f", v);
    return b;
}

std::string tick_label(double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.4g", v);
    return b;
}

}  // namespace

void write_loss_plot_svg(const std::string& path, const LossCurve& curve,
                         const std::optional<RateFit>& fit,
                         const std::vector<std::pair<double, double>>& bound,
                         const std::string& title) {
    if (curve.rows.empty()) throw ArgumentError("write_loss_plot_svg: empty curve");
    const double W = 640, H = 440, ml = 80, mr = 24, mt = 48, mb = 56;

    double xmin = static_cast<double>(curve.rows.front().n);
    double xmax = static_cast<double>(curve.rows.back().n);
    double ymax = 0.0;
    for (const auto& r : curve.rows) ymax = std::max(ymax, r.loss + r.loss_std);
    for (const auto& [x, y] : bound) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymax = std::max(ymax, y);
    }
    if (xmax <= xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax <= 0.0) ymax = 1.0;
    ymax *= 1.08;

    const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    const auto py = [&](double y) { return H - mb - y / ymax * (H - mt - mb); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" +
         num(H) + "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">" + title + "</text>\n";

    // axes
    s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(H - mb) + "\" x2=\"" + num(W - mr) +
         "\" y2=\"" + num(H - mb) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(H - mb) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 4.0;
        const double yv = ymax * t / 4.0;
        s += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(H - mb) + "\" x2=\"" + num(px(xv)) +
             "\" y2=\"" + num(H - mb + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(H - mb + 20) +
             "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" +
             tick_label(xv) + "</text>\n";
        s += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(ml) +
             "\" y2=\"" + num(py(yv)) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(py(yv) + 4) +
             "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\">" +
             tick_label(yv) + "</text>\n";
    }
    s += "<text x=\"" + num((ml + W - mr) / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">n</text>\n";
    s += "<text x=\"18\" y=\"" + num((mt + H - mb) / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 " + num((mt + H - mb) / 2) + ")\">loss</text>\n";

    // theoretical bound overlay
    if (!bound.empty()) {
        std::string pts;
        for (const auto& [x, y] : bound)
            pts += num(px(x)) + "," + num(py(std::min(y, ymax))) + " ";
        s += "<polyline points=\"" + pts +
             "\" fill=\"none\" stroke=\"#aa3333\" stroke-dasharray=\"2,3\"/>\n";
        s += "<text x=\"" + num(W - mr - 6) + "\" y=\"" + num(mt + 34) +
             "\" text-anchor=\"end\" font-size=\"12\" fill=\"#aa3333\" "
             "font-family=\"sans-serif\">bound</text>\n";
    }

    // fitted model a0 + a1 n^-c sampled densely
    if (fit) {
        std::string pts;
        for (int i = 0; i <= 100; ++i) {
            const double x = xmin + (xmax - xmin) * i / 100.0;
            const double y = fit->a0 + fit->a1 * std::pow(x, -fit->c);
            pts += num(px(x)) + "," + num(py(std::clamp(y, 0.0, ymax))) + " ";
        }
        s += "<polyline points=\"" + pts +
             "\" fill=\"none\" stroke=\"#3355cc\" stroke-dasharray=\"6,3\"/>\n";
        char leg[96];
        std::snprintf(leg, sizeof(leg), "fit: %.4g + %.4g n^-%.3f", fit->a0, fit->a1, fit->c);
        s += "<text x=\"" + num(W - mr - 6) + "\" y=\"" + num(mt + 16) +
             "\" text-anchor=\"end\" font-size=\"12\" fill=\"#3355cc\" "
             "font-family=\"sans-serif\">" + leg + "</text>\n";
    }

    // empirical losses with error bars
    std::string pts;
    for (const auto& r : curve.rows) pts += num(px(static_cast<double>(r.n))) + "," + num(py(r.loss)) + " ";
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#222222\"/>\n";
    for (const auto& r : curve.rows) {
        const double x = px(static_cast<double>(r.n));
        if (r.loss_std > 0.0) {
            s += "<line x1=\"" + num(x) + "\" y1=\"" + num(py(std::max(0.0, r.loss - r.loss_std))) +
                 "\" x2=\"" + num(x) + "\" y2=\"" + num(py(std::min(ymax, r.loss + r.loss_std))) +
                 "\" stroke=\"#222222\"/>\n";
        }
        s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(py(r.loss)) +
             "\" r=\"3\" fill=\"#222222\"/>\n";
    }

    s += "</svg>\n";
    write_text_file(path, s);
}

}  // namespace ph
