#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hamrep/geometry.hpp"
#include "hamrep/report.hpp"

namespace hamrep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Values at or above this are treated as +inf.
inline constexpr double kInfinityThreshold = 1e12;

struct UniformGrid {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    // Throws InvalidArgument unless lo < hi and count >= 2.
    static UniformGrid make(double lo, double hi, std::size_t count);
    double spacing() const { return (hi - lo) / static_cast<double>(count - 1); }
    double node(std::size_t i) const;
    // Grid with the given spacing whose nodes include 0 and cover [lo, hi].
    static UniformGrid aligned(double lo, double hi, double spacing);
};

class ConvexGridFunction {
public:
    // Validates: no NaN or -inf, at least one finite value, contiguous finite nodes.
    // Values >= kInfinityThreshold are stored as +inf.
    ConvexGridFunction(UniformGrid grid, std::vector<double> values, bool convex_flag);
    static ConvexGridFunction sample(UniformGrid grid, const std::function<double(double)>& fn,
                                     bool convex_flag = true);

    const UniformGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t i) const { return values_[i]; }
    bool convex_flag() const { return convex_flag_; }
    std::size_t first_finite() const { return first_; }
    std::size_t last_finite() const { return last_; }
    double min_value() const;
    // Piecewise-linear interpolation over finite nodes; +inf outside them.
    double eval(double v) const;
    // Largest midpoint-convexity violation over consecutive finite triples.
    double convexity_violation() const;

    std::string to_csv() const;
    // Parses the `v,value` format; the nodes must be uniformly spaced.
    static ConvexGridFunction from_csv(const std::string& text, bool convex_flag = true);

private:
    UniformGrid grid_;
    std::vector<double> values_;
    bool convex_flag_;
    std::size_t first_ = 0, last_ = 0;
};

struct ConjugateOptions {
    double inf_threshold = kInfinityThreshold;
    // Store +inf where the sup is still increasing at an edge of the input
    // window (the maximizer escaped the truncated window).
    bool mark_escapes = false;
};

ConvexGridFunction conjugate(const ConvexGridFunction& fn, const UniformGrid& out_grid,
                             const ConjugateOptions& opts = {});
// Conjugates onto a dual grid spanning the slope range of fn (dual_count nodes,
// 0 = automatic), then back onto p_grid.
ConvexGridFunction biconjugate(const ConvexGridFunction& fn, const UniformGrid& p_grid,
                               std::size_t dual_count = 0);
// Infimal convolution on f1's grid. f2 must have bounded finite support.
ConvexGridFunction epi_sum(const ConvexGridFunction& f1, const ConvexGridFunction& f2);

struct EffectiveDomain {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = true;
    bool hi_closed = true;
};

EffectiveDomain effective_domain(const ConvexGridFunction& fn);
// Hausdorff distance between the closures of two intervals.
double interval_gap(const EffectiveDomain& a, const EffectiveDomain& b);

struct Epigraph {
    ConvexPolygon body;
    double eta_cap = 0.0;
};

// {(v, eta): fn(v) <= eta <= eta_cap} for the piecewise-linear interpolant of fn.
Epigraph build_epigraph(const ConvexGridFunction& fn, double eta_cap);
// {(v, eta): fn(v) <= eta <= lambda_val}; degenerate when lambda_val equals the minimum.
Epigraph build_bounded_epigraph(const ConvexGridFunction& fn, double lambda_val);

struct LagrangianSlice {
    double t = 0.0;
    double x = 0.0;
    ConvexGridFunction L;
};

struct LagrangianMeta {
    // c(t); empty when the growth condition is absent.
    std::function<std::optional<double>(double)> c;
    double lsc_tolerance = 5e-2;
};

CheckReport check_lagrangian_properties(const std::vector<LagrangianSlice>& family,
                                        const LagrangianMeta& meta);

}  // namespace hamrep
