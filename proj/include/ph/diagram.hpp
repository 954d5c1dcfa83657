#pragma once

#include <cstdint>
#include <vector>

#include "ph/errors.hpp"

namespace ph {

struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    std::int64_t multiplicity = 1;
};

// Finite off-diagonal points with multiplicity plus birth values of essential
// (never-dying) classes.  Canonical form: points sorted by (birth, death), equal
// coordinates merged, zero-persistence points absent, essential births sorted.
struct PersistenceDiagram {
    int hom_dim = 0;
    std::vector<DiagramPoint> points;
    std::vector<double> essential;

    std::int64_t total_multiplicity() const {
        std::int64_t m = 0;
        for (const auto& p : points) m += p.multiplicity;
        return m;
    }
};

// sorts, merges duplicates, drops birth == death pairs; throws ArgumentError on
// death < birth or non-positive multiplicity
void canonicalize(PersistenceDiagram& D);

PersistenceDiagram make_diagram(int hom_dim,
                                std::vector<DiagramPoint> points,
                                std::vector<double> essential = {});

// keeps points with death - birth >= tau and every essential class; tau = 0 is the
// identity
PersistenceDiagram filter_by_persistence(const PersistenceDiagram& D, double tau);

bool operator==(const DiagramPoint& a, const DiagramPoint& b);
bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b);

}  // namespace ph
