#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ph/diagram.hpp"

namespace ph {

struct MeasureAtom {
    double x = 0.0;     // birth coordinate
    double y = 0.0;     // death coordinate, y > x
    double mass = 0.0;  // strictly positive
};

// Weighted atoms strictly above the diagonal.  When every mass is a multiple of
// 1/denominator (mean measures: denominator = number of averaged diagrams),
// mass_denominator records it so downstream solvers can work in exact integer
// units.
struct PersistenceMeasure {
    int hom_dim = 0;
    std::vector<MeasureAtom> atoms;
    std::optional<std::int64_t> mass_denominator;

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.mass;
        return m;
    }
};

// sorts by (x, y), merges coincident atoms, validates y > x and mass > 0
void canonicalize(PersistenceMeasure& mu);

PersistenceMeasure make_measure(int hom_dim, std::vector<MeasureAtom> atoms,
                                std::optional<std::int64_t> mass_denominator = std::nullopt);

// counting measure of the diagram's finite points (multiplicity = mass,
// denominator 1); essential classes live at infinity and are not part of the
// measure
PersistenceMeasure diagram_to_measure(const PersistenceDiagram& D);

// presentational inverse: multiplicity = nearest integer of mass * denominator
// units when a denominator is known, else of the raw mass; atoms rounding to 0
// are dropped
PersistenceDiagram measure_to_diagram(const PersistenceMeasure& mu);

// midpoint projection onto the diagonal; nearest diagonal point in every q-norm
std::pair<double, double> diagonal_projection(double x, double y);

// q-norm distance from (x, y) to the diagonal; the midpoint projection
// ((x+y)/2, (x+y)/2) attains it for every q >= 1
double diagonal_distance(double x, double y, double q);

// pers_p(mu) = sum of mass * diagonal_distance^p
double total_persistence(const PersistenceMeasure& mu, double p, double q);
double total_persistence(const PersistenceDiagram& D, double p, double q);

void validate_order_params(double p, double q);  // p in [1, inf), q in [1, inf]

}  // namespace ph
