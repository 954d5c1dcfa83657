#include "ph/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ph {

void canonicalize(PersistenceDiagram& D) {
    for (const auto& p : D.points) {
        if (std::isnan(p.birth) || std::isnan(p.death))
            throw ArgumentError("diagram point has NaN coordinate");
        if (p.death < p.birth)
            throw ArgumentError("diagram point has death " + std::to_string(p.death) +
                                " < birth " + std::to_string(p.birth));
        if (p.multiplicity <= 0)
            throw ArgumentError("diagram point has non-positive multiplicity");
    }
    std::erase_if(D.points, [](const DiagramPoint& p) { return p.birth == p.death; });
    std::sort(D.points.begin(), D.points.end(),
              [](const DiagramPoint& a, const DiagramPoint& b) {
                  return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
              });
    std::vector<DiagramPoint> merged;
    for (const auto& p : D.points) {
        if (!merged.empty() && merged.back().birth == p.birth &&
            merged.back().death == p.death)
            merged.back().multiplicity += p.multiplicity;
        else
            merged.push_back(p);
    }
    D.points = std::move(merged);
    std::sort(D.essential.begin(), D.essential.end());
}

PersistenceDiagram make_diagram(int hom_dim, std::vector<DiagramPoint> points,
                                std::vector<double> essential) {
    PersistenceDiagram D;
    D.hom_dim = hom_dim;
    D.points = std::move(points);
    D.essential = std::move(essential);
    canonicalize(D);
    return D;
}

PersistenceDiagram filter_by_persistence(const PersistenceDiagram& D, double tau) {
    if (tau < 0.0) throw ArgumentError("filter_by_persistence: tau must be >= 0");
    PersistenceDiagram out;
    out.hom_dim = D.hom_dim;
    out.essential = D.essential;
    for (const auto& p : D.points)
        if (p.death - p.birth >= tau) out.points.push_back(p);
    return out;
}

bool operator==(const DiagramPoint& a, const DiagramPoint& b) {
    return a.birth == b.birth && a.death == b.death && a.multiplicity == b.multiplicity;
}

bool operator==(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    return a.hom_dim == b.hom_dim && a.points == b.points && a.essential == b.essential;
}

}  // namespace ph
