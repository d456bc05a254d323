// Copyright 2026 The hardy-xp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "hardy/cayley.hpp"
#include "hardy/errors.hpp"
#include "hardy/numerics/fft.hpp"

namespace hardy {

enum class GridMapping { linear, arctan };

inline std::string to_string(GridMapping m) { return m == GridMapping::linear ? "linear" : "arctan"; }

inline GridMapping grid_mapping_from_string(const std::string& s) {
    if (s == "linear") return GridMapping::linear;
    if (s == "arctan") return GridMapping::arctan;
    throw ConfigError("unknown grid mapping '" + s + "' (expected linear or arctan)");
}

/// Square two-dimensional sampling grid.
///
/// Linear: nodes (j - M/2) L/M, so 0 is a node, with the conjugate axis at
/// spacing 2 pi / L. Arctan: nodes s tan(theta_j / 2) on position axes and
/// tan(theta_j / 2) / s on momentum axes, with s = scale times the profile's
/// length unit; `extent` is unused.
struct GridSpec {
    double extent = 40.0;
    int points_per_axis = 1024;
    GridMapping mapping = GridMapping::arctan;
    double scale = 1.0;

    void validate() const {
        if (!(extent > 0.0)) throw ConfigError("GridSpec: extent must be positive");
        if (points_per_axis < 64 || points_per_axis % 2 != 0)
            throw ConfigError("GridSpec: points_per_axis must be an even count >= 64");
        if (!(scale > 0.0)) throw ConfigError("GridSpec: scale must be positive");
    }
};

enum class AxisKind { position, momentum };

/// Plain amplitude samples psi(a_i, b_j), row-major with i along particle 1.
struct AmplitudeGrid {
    GridSpec spec;
    double length_unit = 1.0;  ///< absolute s = spec.scale * length_unit
    std::array<AxisKind, 2> axes{AxisKind::position, AxisKind::position};
    std::vector<std::complex<double>> values;

    int size() const { return spec.points_per_axis; }

    double length_scale() const { return spec.scale * length_unit; }

    /// Coordinate scale of the given axis (arctan mapping).
    double axis_scale(int axis) const {
        return axes[axis] == AxisKind::position ? length_scale() : 1.0 / length_scale();
    }

    double node(int axis, int j) const {
        const int m = size();
        if (spec.mapping == GridMapping::arctan) return cayley::coordinate(j, m, axis_scale(axis));
        const double dx = spec.extent / m;
        const double step = axes[axis] == AxisKind::position ? dx : 2.0 * std::numbers::pi / spec.extent;
        return (j - m / 2) * step;
    }

    /// Quadrature weight (cell width) of node j on `axis`.
    double cell_width(int axis, int j) const {
        const int m = size();
        if (spec.mapping == GridMapping::arctan) {
            const double w = cayley::weight(j, m, axis_scale(axis));
            return w * w * cayley::delta_theta(m);
        }
        return axes[axis] == AxisKind::position ? spec.extent / m : 2.0 * std::numbers::pi / spec.extent;
    }

    std::complex<double>& at(int i, int j) { return values[static_cast<std::size_t>(i) * size() + j]; }
    const std::complex<double>& at(int i, int j) const { return values[static_cast<std::size_t>(i) * size() + j]; }

    double squared_norm() const {
        const int m = size();
        std::vector<double> w1(m), w2(m);
        for (int j = 0; j < m; ++j) {
            w1[j] = cell_width(0, j);
            w2[j] = cell_width(1, j);
        }
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            double row = 0.0;
            for (int j = 0; j < m; ++j) row += std::norm(at(i, j)) * w2[j];
            total += row * w1[i];
        }
        return total;
    }
};

enum class FourierDirection { position_to_momentum, momentum_to_position };

struct GridTransformResult {
    AmplitudeGrid grid;
    double discretization_bound = 0.0;  ///< outer-mode mass fraction (arctan) or 0 (linear)
};

namespace detail {

inline void linear_lines(AmplitudeGrid& g, int axis, FourierDirection dir, double step) {
    const int m = g.size();
    const double norm = step / std::sqrt(2.0 * std::numbers::pi);
    const double global = (m / 2) % 2 == 0 ? 1.0 : -1.0;
    const auto sign = dir == FourierDirection::position_to_momentum ? numerics::FftPlan::Sign::negative
                                                                    : numerics::FftPlan::Sign::positive;
    numerics::FftPlan plan(m, sign);
    std::vector<std::complex<double>> line(m);
    for (int l = 0; l < m; ++l) {
        for (int j = 0; j < m; ++j) {
            auto& v = axis == 0 ? g.at(j, l) : g.at(l, j);
            line[j] = (j % 2 == 0) ? v : -v;
        }
        plan.execute(line);
        for (int k = 0; k < m; ++k) {
            auto& v = axis == 0 ? g.at(k, l) : g.at(l, k);
            v = line[k] * (norm * global * ((k % 2 == 0) ? 1.0 : -1.0));
        }
    }
}

}  // namespace detail

/// Partial Fourier transform of one axis: e^{-ipx} for x -> p and e^{+ipx}
/// for p -> x, each with 1/sqrt(2 pi). `axis` is 1 or 2.
///
/// Linear mapping: centred DFT, unitary and exactly invertible. Arctan
/// mapping: Cayley-mode expansion evaluated pointwise on the conjugate arctan
/// axis; the returned bound is the outer-mode fraction of the total mode mass.
inline GridTransformResult grid_partial_ft(const AmplitudeGrid& in, int axis, FourierDirection dir) {
    in.spec.validate();
    if (axis != 1 && axis != 2) throw DomainError("grid_partial_ft: axis must be 1 or 2");
    const int a = axis - 1;
    const AxisKind expected =
        dir == FourierDirection::position_to_momentum ? AxisKind::position : AxisKind::momentum;
    if (in.axes[a] != expected) throw DomainError("grid_partial_ft: axis representation does not match direction");
    const int m = in.size();
    if (static_cast<int>(in.values.size()) != m * m) throw DomainError("grid_partial_ft: grid is not square");

    GridTransformResult out{in, 0.0};
    out.grid.axes[a] = expected == AxisKind::position ? AxisKind::momentum : AxisKind::position;
    if (in.spec.mapping == GridMapping::linear) {
        detail::linear_lines(out.grid, a, dir, in.cell_width(a, 0));
        return out;
    }

    cayley::LineTransform transform(m, in.axis_scale(a));
    const std::size_t stride_line = a == 0 ? 1 : static_cast<std::size_t>(m);
    const std::size_t stride_elem = a == 0 ? static_cast<std::size_t>(m) : 1;
    out.discretization_bound = transform.apply(out.grid.values, static_cast<std::size_t>(m), stride_line, stride_elem);
    if (dir == FourierDirection::momentum_to_position) {
        // e^{+ipx} at x equals the e^{-ipx} transform at -x: reverse the axis.
        for (int l = 0; l < m; ++l) {
            for (int j = 0; j < m / 2; ++j) {
                auto& lo = a == 0 ? out.grid.at(j, l) : out.grid.at(l, j);
                auto& hi = a == 0 ? out.grid.at(m - 1 - j, l) : out.grid.at(l, m - 1 - j);
                std::swap(lo, hi);
            }
        }
    }
    return out;
}

}  // namespace hardy
