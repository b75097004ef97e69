#include "hamrep/compactness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "hamrep/errors.hpp"
#include "hamrep/parallel.hpp"

namespace hamrep {

namespace {

std::vector<Vec2> evaluate(const RepresentationTriple& tr, double t, double x, const std::vector<Control>& as) {
    std::vector<Vec2> out(as.size());
    parallel_for(as.size(), [&](std::size_t i) { out[i] = tr.e(t, x, as[i]); });
    return out;
}

// L(t,x,.) for the triple: the source oracle, or the numeric conjugate of
// H(p) = max_a {p f - l} over the sampled images.
class TripleLagrangian {
public:
    TripleLagrangian(const RepresentationTriple& tr, double t, double x, const std::vector<Vec2>& images,
                     const CompactnessPlan& plan)
        : t_(t), x_(x) {
        if (plan.l_source == LSource::oracle) {
            if (!tr.source || !tr.source->oracle_L)
                throw Error(ErrorCode::InvalidArgument, "oracle Lagrangian requested but the triple has none");
            oracle_ = tr.source->oracle_L;
            return;
        }
        // H is the support function of the image set in direction (p, -1); the hull suffices.
        const auto hull = ConvexPolygon::hull(images);
        const auto pg = UniformGrid::make(-plan.conjugation.p_window, plan.conjugation.p_window,
                                          plan.conjugation.p_count);
        for (std::size_t i = 0; i < pg.count; ++i) {
            const double p = pg.node(i);
            double best = -kInf;
            for (const auto& v : hull.vertices()) best = std::max(best, p * v.x - v.y);
            p_.push_back(p);
            H_.push_back(best);
        }
    }

    // Pointwise conjugate sup_p {v p - H(p)} over the p-grid; +inf when the sup
    // is still increasing at a window edge (same rule as conjugate with mark_escapes).
    double operator()(double v) const {
        if (oracle_) return oracle_(t_, x_, v);
        auto it = memo_.find(v);
        if (it != memo_.end()) return it->second;
        double best = -kInf, inner = -kInf;
        for (std::size_t i = 0; i < p_.size(); ++i) {
            const double val = v * p_[i] - H_[i];
            best = std::max(best, val);
            if (i != 0 && i + 1 != p_.size()) inner = std::max(inner, val);
        }
        const double out = best > inner + 1e-12 * (1.0 + std::abs(best)) ? kInf : best;
        memo_.emplace(v, out);
        return out;
    }

private:
    double t_, x_;
    std::function<double(double, double, double)> oracle_;
    std::vector<double> p_, H_;
    mutable std::map<double, double> memo_;
};

void finish(CheckReport& r) {
    if (r.worst == -kInf) r.worst = 0.0;
    r.pass = r.worst <= r.tolerance;
    r.verdict = r.pass ? "pass" : "fail";
}

}  // namespace

CheckReport epigraph_bound_check(const RepresentationTriple& triple, const CompactnessPlan& plan) {
    if (!triple.control.compact())
        throw Error(ErrorCode::NoncompactControl, "the epigraph bound applies to compact control sets");
    CheckReport rep;
    rep.check = "epigraph_bound";
    rep.tolerance = plan.tolerance;
    rep.worst = -kInf;
    for (double x : plan.xs) {
        const auto as = triple.controls(plan.t, x, plan.controls);
        const auto es = evaluate(triple, plan.t, x, as);
        TripleLagrangian L(triple, plan.t, x, es, plan);
        for (std::size_t i = 0; i < es.size(); ++i) {
            const double m = L(es[i].x) - es[i].y;
            rep.worst = std::max(rep.worst, m);
            if (m > rep.tolerance)
                rep.add_witness({{"t", plan.t}, {"x", x}, {"a", as[i]}, {"f", es[i].x}, {"l", es[i].y},
                                 {"L_of_f", json_number(L(es[i].x))}});
        }
    }
    finish(rep);
    return rep;
}

CheckReport check_domain_identity(const RepresentationTriple& triple, const CompactnessPlan& plan) {
    CheckReport rep;
    rep.check = "domain_identity";
    rep.tolerance = 0.05;
    rep.worst = -kInf;
    for (double x : plan.xs) {
        const auto es = evaluate(triple, plan.t, x, triple.controls(plan.t, x, plan.controls));
        EffectiveDomain img{kInf, -kInf, true, true};
        for (const auto& e : es) img.lo = std::min(img.lo, e.x), img.hi = std::max(img.hi, e.x);
        EffectiveDomain dom{kInf, -kInf, true, true};
        if (plan.l_source == LSource::oracle && triple.source && triple.source->oracle_dom) {
            dom = triple.source->oracle_dom(plan.t, x);
        } else {
            TripleLagrangian L(triple, plan.t, x, es, plan);
            const double W = std::max(std::abs(img.lo), std::abs(img.hi)) + 1.0;
            const auto g = UniformGrid::make(-W, W, 2001);
            for (std::size_t i = 0; i < g.count; ++i)
                if (L(g.node(i)) != kInf) dom.lo = std::min(dom.lo, g.node(i)), dom.hi = std::max(dom.hi, g.node(i));
        }
        const double gap = interval_gap(img, dom);
        rep.worst = std::max(rep.worst, gap);
        rep.add_witness({{"t", plan.t}, {"x", x}, {"image", {img.lo, img.hi}}, {"dom", {json_number(dom.lo), json_number(dom.hi)}},
                         {"gap", json_number(gap)}},
                        16);
    }
    finish(rep);
    return rep;
}

ConvexifiedTriple convexify(const RepresentationTriple& base) {
    if (!base.control.compact())
        throw Error(ErrorCode::NoncompactControl, "convexification needs a compact control set");
    const int atoms = (base.source ? base.source->n : 1) + 1;
    const int dim = base.control.dim();
    ConvexifiedTriple ct;
    ct.base = base;
    ct.triple.control = ControlSet::simplex_product(base.control, atoms);
    ct.triple.provenance = Provenance::user_supplied;
    ct.triple.source = base.source;
    auto e = base.e;
    ct.triple.e = [e, atoms, dim](double t, double x, const Control& a) {
        if (static_cast<int>(a.size()) != atoms * (dim + 1))
            throw Error(ErrorCode::DimMismatch, "convexified control has the wrong dimension");
        Vec2 sum{0.0, 0.0};
        for (int i = 0; i < atoms; ++i) {
            const double alpha = a[atoms * dim + i];
            if (alpha == 0.0) continue;
            Control ai(a.begin() + i * dim, a.begin() + (i + 1) * dim);
            sum = sum + e(t, x, ai) * alpha;
        }
        return sum;
    };
    return ct;
}

std::vector<Vec2> convexified_samples(const ConvexifiedTriple& ct, double t, double x, const ControlPlan& atom_plan) {
    const auto atoms = ct.base.controls(t, x, atom_plan);
    const auto es = evaluate(ct.base, t, x, atoms);
    const int k = ct.triple.control.atoms();
    const int den = atom_plan.simplex_denominator;
    std::vector<Vec2> out;
    if (k != 2) {
        // General case through the encoded controls.
        for (const auto& a : ct.triple.control.sample(atom_plan)) out.push_back(ct.triple.e(t, x, a));
        return out;
    }
    out.reserve(es.size() * es.size() * static_cast<std::size_t>(den + 1));
    for (const auto& ea : es)
        for (const auto& eb : es)
            for (int j = 0; j <= den; ++j) {
                const double w = static_cast<double>(j) / den;
                out.push_back(ea * (1.0 - w) + eb * w);
            }
    return out;
}

CheckReport check_convexification(const ConvexifiedTriple& ct, const CompactnessPlan& plan) {
    CheckReport rep;
    rep.check = "convexification";

    CheckReport recon;
    recon.check = "reconstruction";
    recon.tolerance = plan.tolerance;
    recon.worst = -kInf;
    std::mt19937_64 rng(plan.seed);
    const auto [xmin, xmax] = std::minmax_element(plan.xs.begin(), plan.xs.end());
    std::uniform_real_distribution<double> ux(*xmin, *xmax), up(-3.0, 3.0);
    for (int k = 0; k < 10; ++k) {
        const double x = ux(rng), p = up(rng);
        const auto base = evaluate(ct.base, plan.t, x, ct.base.controls(plan.t, x, plan.atom_controls));
        const auto conv = convexified_samples(ct, plan.t, x, plan.atom_controls);
        double sb = -kInf, sc = -kInf;
        for (const auto& e : base) sb = std::max(sb, p * e.x - e.y);
        for (const auto& e : conv) sc = std::max(sc, p * e.x - e.y);
        recon.worst = std::max(recon.worst, std::abs(sb - sc));
        recon.add_witness({{"x", x}, {"p", p}, {"base", sb}, {"convexified", sc}}, 10);
    }
    finish(recon);
    rep.absorb(recon);

    CheckReport image;
    image.check = "image_hull";
    image.tolerance = 0.05;
    image.worst = -kInf;
    for (double x : plan.xs) {
        const auto base = evaluate(ct.base, plan.t, x, ct.base.controls(plan.t, x, plan.atom_controls));
        const auto conv = convexified_samples(ct, plan.t, x, plan.atom_controls);
        auto hull = [](const std::vector<Vec2>& es) {
            EffectiveDomain d{kInf, -kInf, true, true};
            for (const auto& e : es) d.lo = std::min(d.lo, e.x), d.hi = std::max(d.hi, e.x);
            return d;
        };
        const double gap = interval_gap(hull(base), hull(conv));
        image.worst = std::max(image.worst, gap);
        image.add_witness({{"x", x}, {"gap", gap}});
    }
    finish(image);
    rep.absorb(image);
    rep.worst = std::max(recon.worst, image.worst);
    rep.tolerance = plan.tolerance;
    rep.verdict = rep.pass ? "pass" : "fail";
    return rep;
}

LambdaEstimate extract_lambda(const ConvexifiedTriple& ct, const CompactnessPlan& plan) {
    LambdaEstimate out;
    const ConvexifiedTriple copy = ct;
    const ControlPlan atom_plan = plan.atom_controls;
    out.bound.eval = [copy, atom_plan](double t, double x) {
        double best = -kInf;
        for (const auto& e : convexified_samples(copy, t, x, atom_plan)) best = std::max(best, e.y);
        return best;
    };

    CheckReport& rep = out.certificate;
    rep.check = "extract_lambda";
    rep.tolerance = plan.tolerance;
    rep.worst = -kInf;
    std::vector<double> lam;
    for (double x : plan.xs) {
        const double lv = out.bound.eval(plan.t, x);
        lam.push_back(lv);
        const auto images = evaluate(ct.base, plan.t, x, ct.base.controls(plan.t, x, plan.controls));
        TripleLagrangian L(ct.base, plan.t, x, images, plan);
        double lo = kInf, hi = -kInf;
        bool lo_closed = true, hi_closed = true;
        if (plan.l_source == LSource::oracle && ct.base.source && ct.base.source->oracle_dom) {
            auto d = ct.base.source->oracle_dom(plan.t, x);
            lo = d.lo, hi = d.hi, lo_closed = d.lo_closed, hi_closed = d.hi_closed;
        } else {
            for (const auto& e : images) lo = std::min(lo, e.x), hi = std::max(hi, e.x);
        }
        const int n = 2001;
        double sup = -kInf;
        for (int j = 0; j < n; ++j) {
            if ((j == 0 && !lo_closed) || (j == n - 1 && !hi_closed)) continue;
            const double v = hi > lo ? lo + (hi - lo) * j / (n - 1) : lo;
            sup = std::max(sup, L(v));
        }
        const double m = sup - lv;
        rep.worst = std::max(rep.worst, m);
        rep.add_witness({{"t", plan.t}, {"x", x}, {"lambda", lv}, {"sup_L", json_number(sup)}}, 16);
    }
    double lip = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i)
        for (std::size_t j = i + 1; j < lam.size(); ++j)
            if (plan.xs[i] != plan.xs[j])
                lip = std::max(lip, std::abs(lam[i] - lam[j]) / std::abs(plan.xs[i] - plan.xs[j]));
    rep.add_witness({{"empirical_x_lipschitz", lip},
                     {"note", "x-modulus estimated from samples only; regularity is not certified"}},
                    17);
    finish(rep);
    return out;
}

CheckReport detect_blc_failure(const HamiltonianSpec& spec, const BLCProbe& probe) {
    if (probe.margins.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two margins");
    CheckReport rep;
    rep.check = "detect_blc_failure";
    rep.tolerance = probe.threshold;
    rep.worst = -kInf;
    bool violated = false;
    for (const auto& [t, x] : probe.points) {
        const bool oracle = probe.mode == LagrangianMode::oracle ||
                            (probe.mode == LagrangianMode::automatic && spec.oracle_L && spec.oracle_dom);
        std::function<double(double)> L;
        EffectiveDomain dom;
        std::optional<ConvexGridFunction> slice;
        if (oracle) {
            L = [&spec, t = t, x = x](double v) { return spec.oracle_L(t, x, v); };
            dom = spec.oracle_dom(t, x);
        } else {
            const double W = v_half_width(spec, t, x, 1.0 / probe.margins.back() + 1.0);
            slice.emplace(lagrangian_slice(spec, t, x, UniformGrid::make(-W, W, probe.v_count | 1),
                                           LagrangianMode::numeric, probe.conjugation));
            dom = effective_domain(*slice);
            L = [&slice](double v) { return slice->eval(v); };
        }
        std::vector<double> sups;
        for (double delta : probe.margins) {
            double lo = std::isfinite(dom.lo) ? dom.lo + delta : -1.0 / delta;
            double hi = std::isfinite(dom.hi) ? dom.hi - delta : 1.0 / delta;
            if (lo > hi) lo = hi = 0.5 * (dom.lo + dom.hi);
            if (!std::isfinite(lo)) lo = hi = 0.0;
            double sup = -kInf;
            for (int j = 0; j < probe.samples; ++j) {
                const double v = hi > lo ? lo + (hi - lo) * j / (probe.samples - 1) : lo;
                sup = std::max(sup, L(v));
            }
            sups.push_back(sup);
        }
        const std::size_t m = sups.size();
        const double d1 = sups[m - 2] - (m >= 3 ? sups[m - 3] : sups[m - 2]);
        const double d2 = sups[m - 1] - sups[m - 2];
        const bool diverging = sups.back() >= probe.threshold || (m >= 3 && d1 > 0.0 && d2 >= 5.0 * d1);
        violated = violated || diverging;
        rep.worst = std::max(rep.worst, sups.back());
        nlohmann::json js = nlohmann::json::array();
        for (double s : sups) js.push_back(json_number(s));
        rep.add_witness({{"t", t}, {"x", x}, {"sups", js}, {"diverging", diverging},
                         {"lambda_estimate", json_number(sups.back())}},
                        32);
    }
    rep.verdict = violated ? kBLCViolated : kBLCBounded;
    // A verdict, not a failure: the report passes whenever the probe ran.
    rep.pass = true;
    return rep;
}

}  // namespace hamrep
