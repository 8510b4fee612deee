#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hk/compose.hpp"

namespace hk {

using PlotRow = std::pair<Rational, Rational>;

// Rows on the grid k/resolution over [0, max(1, support end)], plus every breakpoint.
std::vector<PlotRow> plot_dump(const HFunction& h, int resolution);
std::vector<PlotRow> plot_dump(const LazyHEvaluator& h, int resolution);  // grid on [0, 1]

struct SliceVertex {
    std::size_t region;
    Rational x, t, value;
    bool boundary = true;
};

// Boundary polygon of every region, clipped to t <= t_clip when the slice is unbounded,
// followed by the interior grid k/resolution with values.
std::vector<SliceVertex> slice_polylines(const Piecewise2D& k, const Rational& t_clip);
std::vector<SliceVertex> slice_grid(const Piecewise2D& k, int resolution, const Rational& t_clip);

std::string csv(const std::vector<PlotRow>& rows);
std::string csv(const Piecewise2D& k, const std::vector<SliceVertex>& verts);

}  // namespace hk
