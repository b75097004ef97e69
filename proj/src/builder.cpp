#include "hamrep/builder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>

#include "hamrep/errors.hpp"
#include "hamrep/parallel.hpp"

namespace hamrep {

namespace {

constexpr std::size_t kMaxCachedSlices = 4096;

struct Slice {
    ConvexGridFunction L;
    double min_L;
    double M;
    std::vector<Control> lifts;
};

class SliceCache {
public:
    SliceCache(std::shared_ptr<const HamiltonianSpec> spec, GridPolicy policy, std::optional<LambdaBound> lam)
        : spec_(std::move(spec)), policy_(policy), lam_(std::move(lam)) {}

    std::shared_ptr<const Slice> get(double t, double x) {
        const auto key = std::make_pair(t, x);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = slices_.find(key);
            if (it != slices_.end()) return it->second;
        }
        auto s = make(t, x);
        std::lock_guard<std::mutex> lock(mutex_);
        if (slices_.size() >= kMaxCachedSlices) slices_.clear();
        return slices_.emplace(key, std::move(s)).first->second;
    }

    const HamiltonianSpec& spec() const { return *spec_; }
    const GridPolicy& policy() const { return policy_; }

private:
    std::shared_ptr<const Slice> make(double t, double x) const {
        const auto grid = slice_grid(*spec_, t, x, policy_);
        std::optional<ConvexGridFunction> L;
        try {
            L.emplace(lagrangian_slice(*spec_, t, x, grid, policy_.mode, policy_.conjugation));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ImproperFunction) throw;
            throw Error(ErrorCode::GridUnderflow, "E_L(t,x) is empty on the v-window at t=" + format_number(t) +
                                                      ", x=" + format_number(x));
        }
        const double min_L = L->min_value();
        double M = 1.0;
        std::vector<Control> lifts;
        if (!lam_) {
            const std::size_t a = L->first_finite(), b = L->last_finite();
            const std::size_t span = b - a;
            const std::size_t k = std::max<std::size_t>(2, policy_.lift_count);
            std::size_t prev = grid.count;
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t i = a + (span * j) / (k - 1);
                if (i == prev) continue;
                prev = i;
                lifts.push_back({grid.node(i), L->value(i)});
            }
        } else {
            const double lam = lam_->eval(t, x);
            for (std::size_t i = L->first_finite(); i <= L->last_finite(); ++i) {
                if (L->value(i) > lam + 1e-6 * (1.0 + std::abs(lam)))
                    throw Error(ErrorCode::BLCViolation,
                                "L exceeds lambda at t=" + format_number(t) + ", x=" + format_number(x) +
                                    ", v=" + format_number(grid.node(i)) + ": " + format_number(L->value(i)) +
                                    " > " + format_number(lam));
            }
            M = std::abs(lam) + std::abs(spec_->eval(t, x, 0.0)) + *spec_->c(t) * (1.0 + std::abs(x)) + 1.0;
            auto body = build_bounded_epigraph(*L, std::max(lam, min_L)).body;
            for (const auto& v : body.vertices()) lifts.push_back({v.x / M, v.y / M});
        }
        return std::make_shared<const Slice>(Slice{std::move(*L), min_L, M, std::move(lifts)});
    }

    std::shared_ptr<const HamiltonianSpec> spec_;
    GridPolicy policy_;
    std::optional<LambdaBound> lam_;
    std::mutex mutex_;
    std::map<std::pair<double, double>, std::shared_ptr<const Slice>> slices_;
};

// steiner(P(y, E_L)) with a truncation cap high enough that the ball B(y, 2d)
// never reaches the artificial top edge.
Vec2 embed(const Slice& s, Vec2 y, int dirs) {
    double cap = std::max(s.min_L + 10.0, std::abs(y.y) + 10.0);
    auto E = build_epigraph(s.L, cap).body;
    double d = distance(y, E);
    while (cap < y.y + d) {
        cap = y.y + d + 10.0;
        E = build_epigraph(s.L, cap).body;
        d = distance(y, E);
    }
    const double final_cap = std::max(s.min_L + 1.0, std::abs(y.y) + 6.0 * d + 1.0);
    E = build_epigraph(s.L, final_cap).body;
    d = distance(y, E);
    if (d <= 1e-12 * (1.0 + norm(y))) return project_point(y, E);
    return steiner(intersect_disc(E, {y, 2.0 * d}), dirs);
}

Vec2 as_vec(const Control& a) {
    if (a.size() != 2) throw Error(ErrorCode::DimMismatch, "controls of built triples have dimension 2");
    return {a[0], a[1]};
}

RepresentationTriple make_triple(std::shared_ptr<SliceCache> cache, ControlSet control, Provenance prov,
                                 std::shared_ptr<const HamiltonianSpec> spec) {
    RepresentationTriple tr;
    tr.control = std::move(control);
    tr.provenance = prov;
    tr.source = std::move(spec);
    const int dirs = cache->policy().steiner_dirs;
    tr.e = [cache, dirs](double t, double x, const Control& a) {
        auto s = cache->get(t, x);
        return embed(*s, as_vec(a) * s->M, dirs);
    };
    tr.lift = [cache](double t, double x) { return cache->get(t, x)->lifts; };
    tr.scaling = [cache](double t, double x) { return cache->get(t, x)->M; };
    return tr;
}

std::vector<Vec2> evaluate_all(const RepresentationTriple& tr, double t, double x, const std::vector<Control>& as) {
    std::vector<Vec2> out(as.size());
    parallel_for(as.size(), [&](std::size_t i) { out[i] = tr.e(t, x, as[i]); });
    return out;
}

}  // namespace

UniformGrid slice_grid(const HamiltonianSpec& spec, double t, double x, const GridPolicy& policy) {
    const double W = v_half_width(spec, t, x, policy.fallback_half_width);
    return UniformGrid::make(-W, W, policy.v_count | 1);
}

RepresentationTriple build_noncompact(const HamiltonianSpec& spec, const GridPolicy& policy) {
    if (!spec.flags.hlc)
        throw Error(ErrorCode::HypothesisViolation, spec.name + " is not flagged with the Lipschitz condition in x");
    auto shared = std::make_shared<const HamiltonianSpec>(spec);
    auto cache = std::make_shared<SliceCache>(shared, policy, std::nullopt);
    return make_triple(cache, ControlSet::full_space(spec.n + 1), Provenance::noncompact, shared);
}

RepresentationTriple build_compact(const HamiltonianSpec& spec, const LambdaBound& lam, const GridPolicy& policy) {
    if (!spec.c(0.5 * (spec.t_lo + spec.t_hi)))
        throw Error(ErrorCode::MissingC, spec.name + " has no growth constant c(t); the compact construction needs it");
    if (!lam.eval) throw Error(ErrorCode::InvalidArgument, "lambda bound has no evaluator");
    if (!spec.flags.hlc)
        throw Error(ErrorCode::HypothesisViolation, spec.name + " is not flagged with the Lipschitz condition in x");
    auto shared = std::make_shared<const HamiltonianSpec>(spec);
    auto cache = std::make_shared<SliceCache>(shared, policy, lam);
    // Probe set: a violation here fails the build instead of the first evaluation.
    const double tm = 0.5 * (spec.t_lo + spec.t_hi);
    for (double x : {-1.0, 0.0, 1.0}) cache->get(tm, x);
    return make_triple(cache, ControlSet::unit_ball(spec.n + 1), Provenance::compact, shared);
}

double reconstruct_H(const RepresentationTriple& triple, double t, double x, double p, const ControlPlan& plan) {
    const auto as = triple.controls(t, x, plan);
    std::vector<double> vals(as.size());
    parallel_for(as.size(), [&](std::size_t i) {
        Vec2 e = triple.e(t, x, as[i]);
        vals[i] = p * e.x - e.y;
    });
    return vals.empty() ? -kInf : *std::max_element(vals.begin(), vals.end());
}

namespace {

EffectiveDomain dom_closure(const HamiltonianSpec& spec, double t, double x, const GridPolicy& policy) {
    const auto grid = slice_grid(spec, t, x, policy);
    const bool oracle = policy.mode != LagrangianMode::numeric && spec.oracle_dom;
    if (oracle) {
        auto d = spec.oracle_dom(t, x);
        d.lo = std::max(d.lo, grid.lo);
        d.hi = std::min(d.hi, grid.hi);
        return d;
    }
    return effective_domain(lagrangian_slice(spec, t, x, grid, policy.mode, policy.conjugation));
}

EffectiveDomain image_hull(const std::vector<Vec2>& es) {
    EffectiveDomain d{kInf, -kInf, true, true};
    for (const auto& e : es) {
        d.lo = std::min(d.lo, e.x);
        d.hi = std::max(d.hi, e.x);
    }
    return d;
}

}  // namespace

ImageEstimate image_of_controls(const RepresentationTriple& triple, double t, double x, const ControlPlan& plan,
                                const GridPolicy& policy) {
    if (!triple.source) throw Error(ErrorCode::InvalidArgument, "triple has no source Hamiltonian");
    ImageEstimate out;
    out.image = image_hull(evaluate_all(triple, t, x, triple.controls(t, x, plan)));
    out.dom = dom_closure(*triple.source, t, x, policy);
    out.gap = interval_gap(out.image, out.dom);
    return out;
}

CheckReport check_sandwich(const RepresentationTriple& triple, const LambdaBound& lam, double t, double x, double tol,
                           const ControlPlan& plan, const GridPolicy& policy) {
    if (!triple.source) throw Error(ErrorCode::InvalidArgument, "triple has no source Hamiltonian");
    const auto& spec = *triple.source;
    const auto es = evaluate_all(triple, t, x, triple.controls(t, x, plan));
    const auto hull = ConvexPolygon::hull(es);
    const auto L = lagrangian_slice(spec, t, x, slice_grid(spec, t, x, policy), policy.mode, policy.conjugation);
    const double lv = lam.eval(t, x);
    double l_max = lv;
    for (const auto& e : es) l_max = std::max(l_max, e.y);
    const auto EL = build_epigraph(L, std::max(l_max, L.min_value()) + 1.0).body;
    const auto Elam = build_bounded_epigraph(L, lv).body;
    const double outer = excess(hull, EL), inner = excess(Elam, hull);
    CheckReport rep;
    rep.check = "sandwich";
    rep.tolerance = tol;
    rep.worst = std::max(outer, inner);
    rep.pass = rep.worst <= tol;
    rep.verdict = rep.pass ? "pass" : "fail";
    rep.add_witness({{"t", t}, {"x", x}, {"hull_outside_E_L", outer}, {"E_lambda_outside_hull", inner}});
    return rep;
}

CheckReport verify_triple(const RepresentationTriple& triple, const Window& window, const VerifyPlan& plan,
                          const GridPolicy& policy) {
    if (!triple.source) throw Error(ErrorCode::InvalidArgument, "triple has no source Hamiltonian");
    const HamiltonianSpec& spec = *triple.source;
    const int n = spec.n;
    const double R = std::max(std::abs(window.x_lo), std::abs(window.x_hi));

    CheckReport rep;
    rep.check = "verify_triple";
    CheckReport lower, fbound, lip, mixed, member, image;
    lower.check = "l_lower_bound";
    lower.tolerance = 1e-6;
    fbound.check = "f_bound";
    lip.check = "lipschitz";
    mixed.check = "lipschitz_mixed_form";
    member.check = "membership";
    image.check = "image_gap";
    image.tolerance = plan.image_tolerance;
    for (CheckReport* r : {&lower, &fbound, &lip, &mixed, &member, &image}) r->worst = -kInf;

    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> ut(window.t_lo, window.t_hi), ux(window.x_lo, window.x_hi),
        unit(-1.0, 1.0);
    double h_max = 0.0;

    for (int k = 0; k < plan.points; ++k) {
        const double t = ut(rng), x = ux(rng);
        const auto grid = slice_grid(spec, t, x, policy);
        const double h = grid.spacing();
        h_max = std::max(h_max, h);
        const auto as = triple.controls(t, x, plan.controls);
        const auto es = evaluate_all(triple, t, x, as);

        const double floor = -std::abs(spec.eval(t, x, 0.0));
        double l_max = -kInf;
        for (std::size_t i = 0; i < es.size(); ++i) {
            const double m = floor - es[i].y;
            lower.worst = std::max(lower.worst, m);
            if (m > lower.tolerance) lower.add_witness({{"t", t}, {"x", x}, {"a", as[i]}, {"l", es[i].y}, {"floor", floor}});
            l_max = std::max(l_max, es[i].y);
        }

        if (auto c = spec.c(t)) {
            const double bound = *c * (1.0 + std::abs(x));
            for (std::size_t i = 0; i < es.size(); ++i) {
                const double m = std::abs(es[i].x) - bound - h;
                fbound.worst = std::max(fbound.worst, m);
                if (m > 0.0) fbound.add_witness({{"t", t}, {"x", x}, {"a", as[i]}, {"f", es[i].x}, {"bound", bound}});
            }
        }

        const auto L = lagrangian_slice(spec, t, x, grid, policy.mode, policy.conjugation);
        const auto E = build_epigraph(L, std::max(l_max, L.min_value()) + 1.0).body;
        for (std::size_t i = 0; i < es.size(); ++i) {
            const double m = distance(es[i], E) - 2.0 * h;
            member.worst = std::max(member.worst, m);
            if (m > 0.0) member.add_witness({{"t", t}, {"x", x}, {"a", as[i]}, {"distance", m + 2.0 * h}});
        }

        const auto dom = dom_closure(spec, t, x, policy);
        const double gap = interval_gap(image_hull(es), dom);
        image.worst = std::max(image.worst, gap);
        if (gap > image.tolerance) image.add_witness({{"t", t}, {"x", x}, {"gap", gap}});
    }

    // Lipschitz pairs.
    const auto pool = triple.control.sample(plan.controls);
    auto near_control = [&](const Control& a) {
        Control b = a;
        switch (triple.control.kind()) {
            case ControlKind::full_space:
                for (double& c : b) c += 0.5 * unit(rng);
                return b;
            case ControlKind::unit_ball: {
                double s = 0.0;
                for (double& c : b) {
                    c += 0.25 * unit(rng);
                    s += c * c;
                }
                if (s > 1.0)
                    for (double& c : b) c /= std::sqrt(s);
                return b;
            }
            default: return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        }
    };
    struct Pair {
        double t, x, y;
        Control a, b;
    };
    std::vector<Pair> pairs;
    for (int k = 0; k < plan.pairs; ++k) {
        Pair pr;
        pr.t = ut(rng);
        pr.x = ux(rng);
        pr.y = std::clamp(pr.x + 0.25 * unit(rng), window.x_lo, window.x_hi);
        pr.a = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        pr.b = near_control(pr.a);
        pairs.push_back(std::move(pr));
    }
    std::vector<std::array<double, 4>> res(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto& pr = pairs[i];
        Vec2 ea = triple.e(pr.t, pr.x, pr.a), eb = triple.e(pr.t, pr.y, pr.b);
        double da = 0.0;
        const double Mx = triple.M(pr.t, pr.x), My = triple.M(pr.t, pr.y);
        for (std::size_t j = 0; j < pr.a.size(); ++j) da += std::pow(Mx * pr.a[j] - My * pr.b[j], 2);
        res[i] = {norm(ea - eb), std::sqrt(da), 0, 0};
    });
    const double slack = 5e-3 + 10.0 * (n + 1) * h_max;
    lip.tolerance = mixed.tolerance = slack;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& pr = pairs[i];
        const double r = std::abs(pr.x - pr.y);
        const double kw = spec.modulus.k(R, pr.t) * r + spec.modulus.w(R, pr.t, r);
        const double lhs = res[i][0], dab = res[i][1];
        const double combined = 10.0 * (n + 1) * (kw + dab);
        const double mix = 10.0 * (n + 1) * kw + 5.0 * (n + 1) * dab;
        lip.worst = std::max(lip.worst, lhs - combined);
        mixed.worst = std::max(mixed.worst, lhs - mix);
        if (lhs - combined > slack) lip.add_witness({{"t", pr.t}, {"x", pr.x}, {"y", pr.y}, {"lhs", lhs}, {"rhs", combined}});
        if (lhs - mix > slack) mixed.add_witness({{"t", pr.t}, {"x", pr.x}, {"y", pr.y}, {"lhs", lhs}, {"rhs", mix}});
    }

    fbound.tolerance = 0.0;
    member.tolerance = 0.0;
    if (!spec.c(0.5 * (window.t_lo + window.t_hi))) {
        fbound.worst = 0.0;
        fbound.verdict = "skipped: growth condition absent (no c(t))";
    }
    for (CheckReport* r : {&lower, &fbound, &lip, &mixed, &member, &image}) {
        if (r->worst == -kInf) r->worst = 0.0;
        r->pass = r->worst <= r->tolerance;
        if (r->verdict.empty()) r->verdict = r->pass ? "pass" : "fail";
        rep.absorb(*r);
    }
    rep.verdict = rep.pass ? "pass" : "fail";
    return rep;
}

std::string trace_csv(const RepresentationTriple& triple, const std::vector<TracePoint>& points) {
    std::vector<Vec2> es(points.size());
    parallel_for(points.size(), [&](std::size_t i) { es[i] = triple.e(points[i].t, points[i].x, points[i].a); });
    std::string out = "t,x,a1,a2,f,l\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        out += format_number(p.t) + ',' + format_number(p.x) + ',';
        out += format_number(p.a.size() > 0 ? p.a[0] : 0.0) + ',' + format_number(p.a.size() > 1 ? p.a[1] : 0.0) + ',';
        out += format_number(es[i].x) + ',' + format_number(es[i].y) + '\n';
    }
    return out;
}

}  // namespace hamrep
