#include "speclab/quadrature.hpp"

#include <cmath>

namespace speclab {

void gauss_legendre(std::size_t npts, Vec& nodes, Vec& weights) {
    if (npts == 0) throw BadParams("gauss_legendre: zero points");
    const std::size_t n = npts;
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    const double pi = 3.14159265358979323846;

    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre three-term recurrence and derivative at x.
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

void map_to_interval(const Vec& ref_nodes, const Vec& ref_weights, double a, double b,
                     Vec& nodes, Vec& weights) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    nodes.resize(ref_nodes.size());
    weights.resize(ref_nodes.size());
    for (std::size_t i = 0; i < ref_nodes.size(); ++i) {
        nodes[i] = mid + half * ref_nodes[i];
        weights[i] = half * ref_weights[i];
    }
}

Quadrature PanelGrid::as_quadrature() const {
    Quadrature q;
    q.nodes = nodes;
    q.weights = weights;
    q.length = breaks.empty() ? 0.0 : breaks.back() - breaks.front();
    return q;
}

namespace {

PanelGrid build_from_breaks(Vec breaks, std::size_t pts) {
    PanelGrid g;
    g.breaks = std::move(breaks);
    g.pts = pts;
    Vec rn, rw;
    gauss_legendre(pts, rn, rw);
    const std::size_t panels = g.breaks.size() - 1;
    g.nodes.reserve(panels * pts);
    g.weights.reserve(panels * pts);
    Vec pn, pw;
    for (std::size_t p = 0; p < panels; ++p) {
        map_to_interval(rn, rw, g.breaks[p], g.breaks[p + 1], pn, pw);
        g.nodes.insert(g.nodes.end(), pn.begin(), pn.end());
        g.weights.insert(g.weights.end(), pw.begin(), pw.end());
    }
    return g;
}

}  // namespace

PanelGrid uniform_grid(double a, double b, std::size_t panels, std::size_t pts) {
    if (!(b > a) || panels == 0) throw BadParams("uniform_grid: bad interval");
    Vec breaks(panels + 1);
    for (std::size_t p = 0; p <= panels; ++p)
        breaks[p] = a + (b - a) * static_cast<double>(p) / static_cast<double>(panels);
    return build_from_breaks(std::move(breaks), pts);
}

PanelGrid graded_grid(double length, std::size_t levels, std::size_t pts) {
    if (!(length > 0.0) || levels == 0) throw BadParams("graded_grid: bad parameters");
    Vec breaks;
    breaks.reserve(levels + 2);
    breaks.push_back(0.0);
    for (std::size_t k = levels; k >= 1; --k)
        breaks.push_back(length * std::ldexp(1.0, -static_cast<int>(k)));
    breaks.push_back(length);
    return build_from_breaks(std::move(breaks), pts);
}

PanelGrid sqrt_graded_grid(double length, std::size_t quad_panels, std::size_t pts,
                           std::size_t dyadic_levels) {
    if (!(length > 0.0) || quad_panels == 0)
        throw BadParams("sqrt_graded_grid: bad parameters");
    Vec breaks;
    breaks.reserve(quad_panels + dyadic_levels + 1);
    breaks.push_back(0.0);
    const double first = length / (static_cast<double>(quad_panels) *
                                   static_cast<double>(quad_panels));
    for (std::size_t l = dyadic_levels; l >= 1; --l)
        breaks.push_back(first * std::ldexp(1.0, -static_cast<int>(l)));
    for (std::size_t k = 1; k <= quad_panels; ++k) {
        const double r = static_cast<double>(k) / static_cast<double>(quad_panels);
        breaks.push_back(length * r * r);
    }
    return build_from_breaks(std::move(breaks), pts);
}

PanelGrid refined(const PanelGrid& g) {
    Vec breaks;
    breaks.reserve(2 * g.panels() + 1);
    for (std::size_t p = 0; p < g.panels(); ++p) {
        breaks.push_back(g.breaks[p]);
        breaks.push_back(0.5 * (g.breaks[p] + g.breaks[p + 1]));
    }
    breaks.push_back(g.breaks.back());
    return build_from_breaks(std::move(breaks), g.pts);
}

}  // namespace speclab
