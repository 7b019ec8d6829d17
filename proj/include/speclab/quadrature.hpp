#pragma once

#include <cstddef>

#include "speclab/types.hpp"

namespace speclab {

/// Nodes and weights of a composite rule on (0, L); weights sum to L.
struct Quadrature {
    Vec nodes;    // ascending, inside (0, L)
    Vec weights;  // positive
    double length = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
void gauss_legendre(std::size_t npts, Vec& nodes, Vec& weights);

/// Composite Gauss-Legendre grid organized by panels so that prefix
/// integrals up to an interior point can be assembled panel by panel.
struct PanelGrid {
    Vec breaks;           // panel boundaries, ascending, size = panels+1
    std::size_t pts = 0;  // nodes per panel
    Vec nodes;            // grouped per panel, ascending overall
    Vec weights;

    std::size_t panels() const { return breaks.empty() ? 0 : breaks.size() - 1; }
    std::size_t size() const { return nodes.size(); }
    std::size_t panel_of(std::size_t node_index) const { return node_index / pts; }

    Quadrature as_quadrature() const;
};

/// Uniform panels on [a, b].
PanelGrid uniform_grid(double a, double b, std::size_t panels, std::size_t pts);

/// Panels on [0, L] graded dyadically toward 0: [0, L*2^-levels], then
/// [L*2^-k, L*2^-k+1] up to [L/2, L]. Resolves integrands whose variation
/// scale shrinks toward the origin.
PanelGrid graded_grid(double length, std::size_t levels, std::size_t pts);

/// Panels on [0, L] with breakpoints L*(k/K)^2, so that Laguerre-type
/// oscillation (zero spacing ~ sqrt(y)) contributes a bounded number of
/// half-waves per panel, plus a dyadic subdivision of the first panel toward
/// 0 for corner singularities.
PanelGrid sqrt_graded_grid(double length, std::size_t quad_panels, std::size_t pts,
                           std::size_t dyadic_levels);

/// Each panel split in two, same nodes per panel. Doubling step of the
/// adaptive entry-integral loop.
PanelGrid refined(const PanelGrid& g);

/// Gauss-Legendre rule mapped onto [a, b].
void map_to_interval(const Vec& ref_nodes, const Vec& ref_weights, double a, double b,
                     Vec& nodes, Vec& weights);

}  // namespace speclab
