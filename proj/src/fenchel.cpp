#include "hamrep/fenchel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hamrep/errors.hpp"

namespace hamrep {

UniformGrid UniformGrid::make(double lo, double hi, std::size_t count) {
    if (!(lo < hi) || count < 2 || !std::isfinite(lo) || !std::isfinite(hi))
        throw Error(ErrorCode::InvalidArgument, "grid needs lo < hi and count >= 2");
    return {lo, hi, count};
}

double UniformGrid::node(std::size_t i) const {
    const double n = static_cast<double>(count - 1);
    const double k = static_cast<double>(i);
    return (lo * (n - k) + hi * k) / n;
}

UniformGrid UniformGrid::aligned(double lo, double hi, double spacing) {
    if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "spacing must be positive");
    double k = std::ceil(std::max(std::abs(lo), std::abs(hi)) / spacing - 1e-9);
    if (k < 1.0) k = 1.0;
    return make(-k * spacing, k * spacing, static_cast<std::size_t>(2 * k + 1));
}

ConvexGridFunction::ConvexGridFunction(UniformGrid grid, std::vector<double> values, bool convex_flag)
    : grid_(grid), values_(std::move(values)), convex_flag_(convex_flag) {
    if (values_.size() != grid_.count)
        throw Error(ErrorCode::InvalidArgument, "value count does not match grid");
    bool any = false;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        double& v = values_[i];
        if (std::isnan(v)) throw Error(ErrorCode::ImproperFunction, "NaN value");
        if (v == -kInf) throw Error(ErrorCode::ImproperFunction, "value -inf");
        if (v >= kInfinityThreshold) v = kInf;
        if (v != kInf) {
            if (!any) first_ = i;
            if (any && last_ + 1 != i) throw Error(ErrorCode::ImproperFunction, "finite nodes not contiguous");
            last_ = i;
            any = true;
        }
    }
    if (!any) throw Error(ErrorCode::ImproperFunction, "function is +inf everywhere");
}

ConvexGridFunction ConvexGridFunction::sample(UniformGrid grid, const std::function<double(double)>& fn,
                                              bool convex_flag) {
    std::vector<double> vals(grid.count);
    for (std::size_t i = 0; i < grid.count; ++i) vals[i] = fn(grid.node(i));
    return ConvexGridFunction(grid, std::move(vals), convex_flag);
}

double ConvexGridFunction::min_value() const {
    return *std::min_element(values_.begin() + first_, values_.begin() + last_ + 1);
}

double ConvexGridFunction::eval(double v) const {
    const double h = grid_.spacing();
    double pos = (v - grid_.lo) / h;
    double r = std::round(pos);
    if (std::abs(pos - r) <= 1e-9) {
        if (r < 0.0 || r > static_cast<double>(grid_.count - 1)) return kInf;
        return values_[static_cast<std::size_t>(r)];
    }
    if (pos < static_cast<double>(first_) || pos > static_cast<double>(last_)) return kInf;
    auto i = static_cast<std::size_t>(std::floor(pos));
    double w = pos - static_cast<double>(i);
    return values_[i] * (1.0 - w) + values_[i + 1] * w;
}

double ConvexGridFunction::convexity_violation() const {
    double worst = 0.0;
    for (std::size_t i = first_ + 1; i + 1 <= last_; ++i) {
        worst = std::max(worst, values_[i] - 0.5 * (values_[i - 1] + values_[i + 1]));
    }
    return worst;
}

std::string ConvexGridFunction::to_csv() const {
    std::string out = "v,value\n";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        out += format_number(grid_.node(i));
        out += ',';
        out += format_number(values_[i]);
        out += '\n';
    }
    return out;
}

ConvexGridFunction ConvexGridFunction::from_csv(const std::string& text, bool convex_flag) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "v,value")
        throw Error(ErrorCode::InvalidArgument, "expected header 'v,value'");
    std::vector<double> vs, vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::InvalidArgument, "malformed CSV row: " + line);
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        vs.push_back(std::stod(a));
        vals.push_back(b == "inf" ? kInf : std::stod(b));
    }
    if (vs.size() < 2) throw Error(ErrorCode::InvalidArgument, "CSV needs at least two rows");
    auto grid = UniformGrid::make(vs.front(), vs.back(), vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (std::abs(vs[i] - grid.node(i)) > 1e-9 * (1.0 + std::abs(vs[i])))
            throw Error(ErrorCode::InvalidArgument, "CSV nodes are not uniformly spaced");
    }
    return ConvexGridFunction(grid, std::move(vals), convex_flag);
}

ConvexGridFunction conjugate(const ConvexGridFunction& fn, const UniformGrid& out_grid,
                             const ConjugateOptions& opts) {
    const auto& g = fn.grid();
    const std::size_t a = fn.first_finite(), b = fn.last_finite();
    std::vector<double> p(b - a + 1), f(b - a + 1);
    for (std::size_t i = a; i <= b; ++i) {
        p[i - a] = g.node(i);
        f[i - a] = fn.value(i);
    }
    const std::size_t m = p.size();
    // Window edges only count as escape points when fn is finite there.
    const bool lo_edge = opts.mark_escapes && a == 0 && m > 1;
    const bool hi_edge = opts.mark_escapes && b + 1 == g.count && m > 1;

    std::vector<double> out(out_grid.count);
    for (std::size_t k = 0; k < out_grid.count; ++k) {
        const double w = out_grid.node(k);
        double best = -kInf;
        double inner = -kInf;  // max over nodes that are not escape edges
        for (std::size_t i = 0; i < m; ++i) {
            double val = w * p[i] - f[i];
            best = std::max(best, val);
            bool edge = (lo_edge && i == 0) || (hi_edge && i + 1 == m);
            if (!edge) inner = std::max(inner, val);
        }
        double v = best;
        if ((lo_edge || hi_edge) && best > inner + 1e-12 * (1.0 + std::abs(best))) v = kInf;
        if (v >= opts.inf_threshold) v = kInf;
        out[k] = v;
    }
    bool any_finite = std::any_of(out.begin(), out.end(), [](double v) { return v != kInf; });
    if (!any_finite) throw Error(ErrorCode::ImproperFunction, "conjugate is +inf on the whole output grid");
    return ConvexGridFunction(out_grid, std::move(out), true);
}

ConvexGridFunction biconjugate(const ConvexGridFunction& fn, const UniformGrid& p_grid, std::size_t dual_count) {
    const auto& g = fn.grid();
    const double h = g.spacing();
    const std::size_t a = fn.first_finite(), b = fn.last_finite();
    double s_lo = -1.0, s_hi = 1.0;
    if (b > a) {
        s_lo = (fn.value(a + 1) - fn.value(a)) / h;
        s_hi = (fn.value(b) - fn.value(b - 1)) / h;
    }
    if (!(s_hi - s_lo > 1e-9)) {
        s_lo -= 1.0;
        s_hi += 1.0;
    }
    if (dual_count == 0) dual_count = std::min<std::size_t>(g.count, 4001);
    auto dual = conjugate(fn, UniformGrid::make(s_lo, s_hi, std::max<std::size_t>(dual_count, 3)));
    return conjugate(dual, p_grid);
}

ConvexGridFunction epi_sum(const ConvexGridFunction& f1, const ConvexGridFunction& f2) {
    const auto& g2 = f2.grid();
    if (f2.first_finite() == 0 || f2.last_finite() + 1 == g2.count)
        throw Error(ErrorCode::UnboundedSummand, "second summand is finite up to the grid window edge");
    const auto& g1 = f1.grid();
    std::vector<double> out(g1.count, kInf);
    for (std::size_t k = 0; k < g1.count; ++k) {
        const double v = g1.node(k);
        double best = kInf;
        for (std::size_t j = f2.first_finite(); j <= f2.last_finite(); ++j) {
            double f1v = f1.eval(v - g2.node(j));
            if (f1v == kInf) continue;
            best = std::min(best, f1v + f2.value(j));
        }
        out[k] = best;
    }
    bool any_finite = std::any_of(out.begin(), out.end(), [](double v) { return v != kInf; });
    if (!any_finite) throw Error(ErrorCode::ImproperFunction, "epi-sum is +inf on the whole grid");
    return ConvexGridFunction(g1, std::move(out), true);
}

namespace {

// Heuristic: an end is open when the function blows up approaching it.
bool end_is_closed(const ConvexGridFunction& fn, std::size_t b, int inward) {
    const double h = fn.grid().spacing();
    const double fb = fn.value(b);
    if (fb >= 1e6) return false;
    auto at = [&](int steps) -> std::optional<double> {
        long idx = static_cast<long>(b) + inward * steps;
        if (idx < static_cast<long>(fn.first_finite()) || idx > static_cast<long>(fn.last_finite()))
            return std::nullopt;
        return fn.value(static_cast<std::size_t>(idx));
    };
    auto f1 = at(1);
    if (!f1) return true;
    double j1 = std::abs(fb - *f1);
    if (j1 / h >= 1e6 / h) return false;
    auto f2 = at(2);
    if (!f2) return true;
    double j2 = std::abs(*f1 - *f2);
    return !(j1 > 0.5 * std::max(1.0, std::abs(*f1)) && j1 > 2.0 * j2);
}

}  // namespace

EffectiveDomain effective_domain(const ConvexGridFunction& fn) {
    EffectiveDomain d;
    d.lo = fn.grid().node(fn.first_finite());
    d.hi = fn.grid().node(fn.last_finite());
    d.lo_closed = end_is_closed(fn, fn.first_finite(), +1);
    d.hi_closed = end_is_closed(fn, fn.last_finite(), -1);
    return d;
}

double interval_gap(const EffectiveDomain& a, const EffectiveDomain& b) {
    return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
}

namespace {

Epigraph truncated_epigraph(const ConvexGridFunction& fn, double cap) {
    const auto& g = fn.grid();
    const double h = g.spacing();
    std::vector<Vec2> pts;
    std::size_t lo = g.count, hi = 0;
    for (std::size_t i = fn.first_finite(); i <= fn.last_finite(); ++i) {
        if (fn.value(i) <= cap) {
            pts.push_back({g.node(i), fn.value(i)});
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    }
    if (pts.empty()) throw Error(ErrorCode::EmptyResult, "no node below the cap");
    pts.push_back({g.node(lo), cap});
    pts.push_back({g.node(hi), cap});
    // Where the interpolant crosses the cap between two finite nodes.
    if (lo > fn.first_finite()) {
        double f0 = fn.value(lo - 1), f1 = fn.value(lo);
        pts.push_back({g.node(lo) - h * (cap - f1) / (f0 - f1), cap});
    }
    if (hi < fn.last_finite()) {
        double f0 = fn.value(hi), f1 = fn.value(hi + 1);
        pts.push_back({g.node(hi) + h * (cap - f0) / (f1 - f0), cap});
    }
    return {ConvexPolygon::hull(pts), cap};
}

}  // namespace

Epigraph build_epigraph(const ConvexGridFunction& fn, double eta_cap) {
    if (!(eta_cap > fn.min_value())) throw Error(ErrorCode::CapTooLow, "cap must exceed the minimum value");
    return truncated_epigraph(fn, eta_cap);
}

Epigraph build_bounded_epigraph(const ConvexGridFunction& fn, double lambda_val) {
    if (lambda_val < fn.min_value()) throw Error(ErrorCode::EmptyResult, "lambda below the infimum");
    return truncated_epigraph(fn, lambda_val);
}

CheckReport check_lagrangian_properties(const std::vector<LagrangianSlice>& family, const LagrangianMeta& meta) {
    CheckReport rep;
    rep.check = "lagrangian_properties";

    for (const char* name : {"L1", "L2"}) {
        CheckReport r;
        r.check = name;
        r.verdict = "not numerically checkable";
        rep.children.push_back(r);
    }

    CheckReport l3;
    l3.check = "L3";
    for (const auto& s : family) {
        double scale = 0.0;
        for (std::size_t i = s.L.first_finite(); i <= s.L.last_finite(); ++i)
            scale = std::max(scale, std::abs(s.L.value(i)));
        double viol = s.L.convexity_violation() / (1.0 + scale);
        l3.worst = std::max(l3.worst, viol);
        if (viol > 1e-9) l3.add_witness({{"t", s.t}, {"x", s.x}, {"relative_violation", viol}});
    }
    l3.tolerance = 1e-9;
    l3.pass = l3.worst <= l3.tolerance;
    rep.absorb(l3);

    CheckReport l5;
    l5.check = "L5";
    bool have_c = static_cast<bool>(meta.c);
    for (const auto& s : family) {
        auto c = have_c ? meta.c(s.t) : std::nullopt;
        if (!c) {
            have_c = false;
            break;
        }
        auto d = effective_domain(s.L);
        double bound = *c * (1.0 + std::abs(s.x)) + s.L.grid().spacing();
        double ex = std::max(std::abs(d.lo), std::abs(d.hi)) - bound;
        l5.worst = std::max(l5.worst, ex);
        if (ex > 0.0) l5.add_witness({{"t", s.t}, {"x", s.x}, {"excess", ex}});
    }
    if (!have_c) {
        l5.worst = 0.0;
        l5.verdict = "skipped: growth condition absent (no c(t))";
    } else {
        l5.pass = l5.worst <= 0.0;
    }
    rep.absorb(l5);

    // Sampled sequence probes; advisory, not part of the overall verdict.
    for (int variant = 0; variant < 2; ++variant) {
        CheckReport probe;
        probe.check = variant == 0 ? "L4" : "L6";
        probe.tolerance = meta.lsc_tolerance;
        for (std::size_t i = 0; i < family.size(); ++i) {
            const auto& s = family[i];
            const LagrangianSlice* nb = nullptr;
            double best = kInf;
            for (std::size_t j = 0; j < family.size(); ++j) {
                if (j == i) continue;
                const auto& o = family[j];
                if (variant == 0 && o.t != s.t) continue;
                double dist = std::abs(o.x - s.x) + (variant == 1 ? std::abs(o.t - s.t) : 0.0);
                if (dist < best) best = dist, nb = &o;
            }
            if (!nb) continue;
            const auto& g = s.L.grid();
            const double rho = best + 2.0 * g.spacing();
            const auto& gn = nb->L.grid();
            for (std::size_t k = s.L.first_finite(); k <= s.L.last_finite(); ++k) {
                const double v = g.node(k), target = s.L.value(k);
                double gap = kInf;
                for (std::size_t m = nb->L.first_finite(); m <= nb->L.last_finite(); ++m) {
                    if (std::abs(gn.node(m) - v) <= rho) gap = std::min(gap, std::abs(nb->L.value(m) - target));
                }
                probe.worst = std::max(probe.worst, gap);
            }
        }
        probe.pass = probe.worst <= probe.tolerance;
        probe.verdict = std::string(probe.pass ? "probe pass" : "probe gap") +
                        " (sampled sequences only; full verification out of reach)";
        rep.children.push_back(probe);
    }
    return rep;
}

}  // namespace hamrep
