#include "ph/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ph {

void validate_order_params(double p, double q) {
    if (std::isnan(p) || p < 1.0 || std::isinf(p))
        throw ArgumentError("order p must lie in [1, inf); got " + std::to_string(p));
    if (std::isnan(q) || q < 1.0)
        throw ArgumentError("ground norm q must lie in [1, inf]; got " + std::to_string(q));
}

void canonicalize(PersistenceMeasure& mu) {
    for (const auto& a : mu.atoms) {
        if (std::isnan(a.x) || std::isnan(a.y))
            throw ArgumentError("measure atom has NaN coordinate");
        if (!(a.y > a.x))
            throw ArgumentError("measure atom (" + std::to_string(a.x) + ", " +
                                std::to_string(a.y) + ") is not strictly above the diagonal");
        if (!(a.mass > 0.0))
            throw ArgumentError("measure atom has non-positive mass");
    }
    if (mu.mass_denominator && *mu.mass_denominator <= 0)
        throw ArgumentError("mass denominator must be positive");
    std::sort(mu.atoms.begin(), mu.atoms.end(), [](const MeasureAtom& a, const MeasureAtom& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<MeasureAtom> merged;
    for (const auto& a : mu.atoms) {
        if (!merged.empty() && merged.back().x == a.x && merged.back().y == a.y)
            merged.back().mass += a.mass;
        else
            merged.push_back(a);
    }
    mu.atoms = std::move(merged);
}

PersistenceMeasure make_measure(int hom_dim, std::vector<MeasureAtom> atoms,
                                std::optional<std::int64_t> mass_denominator) {
    PersistenceMeasure mu;
    mu.hom_dim = hom_dim;
    mu.atoms = std::move(atoms);
    mu.mass_denominator = mass_denominator;
    canonicalize(mu);
    return mu;
}

PersistenceMeasure diagram_to_measure(const PersistenceDiagram& D) {
    std::vector<MeasureAtom> atoms;
    atoms.reserve(D.points.size());
    for (const auto& pt : D.points)
        atoms.push_back({pt.birth, pt.death, static_cast<double>(pt.multiplicity)});
    return make_measure(D.hom_dim, std::move(atoms), 1);
}

PersistenceDiagram measure_to_diagram(const PersistenceMeasure& mu) {
    const double denom =
        mu.mass_denominator ? static_cast<double>(*mu.mass_denominator) : 1.0;
    std::vector<DiagramPoint> pts;
    for (const auto& a : mu.atoms) {
        const std::int64_t mult = std::llround(a.mass * denom);
        if (mult > 0) pts.push_back({a.x, a.y, mult});
    }
    return make_diagram(mu.hom_dim, std::move(pts));
}

std::pair<double, double> diagonal_projection(double x, double y) {
    const double m = 0.5 * (x + y);
    return {m, m};
}

double diagonal_distance(double x, double y, double q) {
    const double h = 0.5 * (y - x);
    if (std::isinf(q)) return h;
    return h * std::pow(2.0, 1.0 / q);
}

double total_persistence(const PersistenceMeasure& mu, double p, double q) {
    validate_order_params(p, q);
    double s = 0.0;
    for (const auto& a : mu.atoms) s += a.mass * std::pow(diagonal_distance(a.x, a.y, q), p);
    return s;
}

double total_persistence(const PersistenceDiagram& D, double p, double q) {
    validate_order_params(p, q);
    double s = 0.0;
    for (const auto& pt : D.points)
        s += static_cast<double>(pt.multiplicity) *
             std::pow(diagonal_distance(pt.birth, pt.death, q), p);
    return s;
}

}  // namespace ph
