#pragma once

#include <limits>
#include <vector>

#include "ph/diagram.hpp"
#include "ph/point_cloud.hpp"

namespace ph {

// Simplex with its filtration value.  Vertices are sorted ascending; the value of
// a VR simplex is its diameter (closed convention: the simplex enters AT the
// diameter), vertices enter at 0.
struct FilteredSimplex {
    std::vector<int> vertices;
    double value = 0.0;

    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

using Filtration = std::vector<FilteredSimplex>;

// Explicit VR filtration: all simplices of dimension <= max_dim + 1 with diameter
// <= max_scale, sorted by (value, dimension, vertex lex).  Intended for moderate
// sizes; refuses to build more than ~5e7 simplices.
Filtration build_vr_filtration(const FiniteMetricSpace& M, int max_dim,
                               double max_scale = std::numeric_limits<double>::infinity());

// Z/2 persistence of an explicit filtration by sorted-column reduction with the
// twist (clearing) optimization, dimensions descending.  The filtration must be
// sorted and face-closed.  Returns diagrams for dimensions 0..max_hom_dim; classes
// alive at the end of the filtration are reported as essential.
std::vector<PersistenceDiagram> compute_persistence(const Filtration& filtration,
                                                    int max_hom_dim);

// Textbook left-to-right column reduction of the full boundary matrix, no
// optimizations.  Test oracle; kept deliberately independent of
// compute_persistence.
std::vector<PersistenceDiagram> naive_reduction_oracle(const Filtration& filtration,
                                                       int max_hom_dim);

// VR persistence straight from a metric space without materializing simplices:
// union-find in degree 0, then coboundary (cohomology) reduction per dimension
// with clearing and the emergent-pair shortcut.  Same diagrams as
// compute_persistence on build_vr_filtration(M, max_hom_dim, max_scale); usable at
// n in the thousands for max_hom_dim = 1.  A max_scale of infinity is tightened to
// the enclosing radius, which provably leaves every diagram unchanged.
std::vector<PersistenceDiagram> rips_persistence(
    const FiniteMetricSpace& M, int max_hom_dim,
    double max_scale = std::numeric_limits<double>::infinity());

}  // namespace ph
