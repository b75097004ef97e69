#include "hamrep/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hamrep/errors.hpp"
#include "hamrep/parallel.hpp"
#include "hamrep/zoo.hpp"

namespace hamrep {

namespace {

double draw(std::mt19937_64& rng, double lo, double hi) {
    if (!(hi > lo)) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<std::pair<double, double>> window_points(const Window& w, int count, std::mt19937_64& rng) {
    std::vector<std::pair<double, double>> out;
    for (int k = 0; k < count; ++k) {
        double t = draw(rng, w.t_lo, w.t_hi);
        double x = draw(rng, w.x_lo, w.x_hi);
        out.emplace_back(t, x);
    }
    return out;
}

std::string describe(const Window& w) {
    return "t=[" + format_number(w.t_lo) + "," + format_number(w.t_hi) + "] x=[" + format_number(w.x_lo) + "," +
           format_number(w.x_hi) + "]";
}

// Slices of every member share the grid of an oracle-free member so that
// grid effects cancel in the comparisons.
ConvexGridFunction numeric_slice(const HamiltonianSpec& spec, const HamiltonianSpec& grid_spec, double t, double x,
                                 const GridPolicy& policy) {
    return lagrangian_slice(spec, t, x, slice_grid(grid_spec, t, x, policy), policy.mode, policy.conjugation);
}

HamiltonianSpec grid_spec_of(const HamiltonianSpec& base) {
    HamiltonianSpec s = base;
    s.oracle_L = {};
    s.oracle_dom = {};
    s.alternate_L = {};
    return s;
}

// Truncated epigraph with a cap high enough that distances from y are exact.
ConvexPolygon epigraph_for_distance(const ConvexGridFunction& L, Vec2 y) {
    double cap = std::max(L.min_value(), y.y) + 10.0;
    auto E = build_epigraph(L, cap).body;
    while (cap < y.y + distance(y, E)) {
        cap = y.y + distance(y, E) + 10.0;
        E = build_epigraph(L, cap).body;
    }
    return E;
}

RepresentationTriple build_member(const PerturbationFamily& family, int i, BuilderKind kind, const GridPolicy& policy) {
    const auto spec = family_member(family, i);
    if (kind == BuilderKind::noncompact) return build_noncompact(spec, policy);
    if (!family.lambda) throw Error(ErrorCode::HypothesisViolation, "compact stability run needs lambda_i");
    auto lam = family.lambda;
    return build_compact(spec, LambdaBound{[lam, i](double t, double x) { return lam(i, t, x); }, {}}, policy);
}

}  // namespace

PerturbationFamily standard_family(const std::string& name) {
    PerturbationFamily f;
    if (name == "ex_2_1_sin") {
        f.base = builtin("ex_2_1");
        f.perturb = [](int i, double, double x, double) { return std::sin(x) / i; };
        f.description = "H + sin(x)/i";
    } else if (name == "ex_2_2_shift") {
        f.base = builtin("ex_2_2");
        f.perturb = [](int i, double, double, double) { return -1.0 / i; };
        f.lambda = [](int i, double, double x) { return std::abs(x) + (i == 0 ? 0.0 : 1.0 / i); };
        f.c = [](int, double) -> std::optional<double> { return 1.0; };
        f.description = "H - 1/i with lambda_i = |x| + 1/i and c = 1";
    } else if (name == "ex_3_4_abs") {
        f.base = builtin("ex_3_4");
        f.perturb = [](int i, double, double x, double) { return std::abs(x) / i; };
        f.description = "H + |x|/i";
    } else if (name == "ex_2_2_cos") {
        f.base = builtin("ex_2_2");
        f.perturb = [](int i, double, double, double p) { return std::cos(p) / i; };
        f.description = "H + cos(p)/i";
    } else if (name == "ex_2_2_growth") {
        f.base = builtin("ex_2_2");
        f.perturb = [](int i, double, double, double p) { return 0.1 * (1.0 + std::abs(p)) / i; };
        f.description = "H + 0.1(1+|p|)/i";
    } else if (name == "ex_2_2_zero") {
        f.base = builtin("ex_2_2");
        f.description = "H (no perturbation)";
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown family: " + name);
    }
    return f;
}

std::vector<std::string> standard_family_names() {
    return {"ex_2_1_sin", "ex_2_2_shift", "ex_3_4_abs", "ex_2_2_cos", "ex_2_2_growth", "ex_2_2_zero"};
}

HamiltonianSpec family_member(const PerturbationFamily& family, int i) {
    HamiltonianSpec s = family.base;
    if (family.c) {
        auto c = family.c;
        s.modulus.c = [c, i](double t) { return c(i, t); };
    }
    if (i == 0 || !family.perturb) return s;
    s.name = family.base.name + "_i" + std::to_string(i);
    auto base = family.base.eval;
    auto pert = family.perturb;
    s.eval = [base, pert, i](double t, double x, double p) { return base(t, x, p) + pert(i, t, x, p); };
    s.oracle_L = {};
    s.oracle_dom = {};
    s.alternate_L = {};
    s.lambda_bound = {};
    return s;
}

CheckReport check_family_convexity(const PerturbationFamily& family, const Window& window, std::uint64_t seed) {
    CheckReport rep;
    rep.check = "family_convexity";
    rep.tolerance = 1e-9;
    rep.worst = 0.0;
    std::mt19937_64 rng(seed);
    const auto pts = window_points(window, 8, rng);
    constexpr double kDelta = 0.05;
    for (int i : family.indices) {
        const auto spec = family_member(family, i);
        double worst_i = 0.0;
        for (const auto& [t, x] : pts) {
            for (int j = -200; j <= 200; ++j) {
                const double p = j * kDelta;
                const double h0 = spec.eval(t, x, p);
                const double mid = 0.5 * (spec.eval(t, x, p - kDelta) + spec.eval(t, x, p + kDelta));
                const double v = (h0 - mid) / (1.0 + std::abs(h0));
                if (v > worst_i) {
                    worst_i = v;
                    if (v > rep.tolerance) rep.add_witness({{"i", i}, {"t", t}, {"x", x}, {"p", p}, {"violation", v}});
                }
            }
        }
        rep.worst = std::max(rep.worst, worst_i);
    }
    rep.pass = rep.worst <= rep.tolerance;
    rep.verdict = rep.pass ? "convex in p on all samples" : "not convex in p for some members";
    return rep;
}

std::string StabilityReport::to_csv() const {
    std::string out = "i,sup_e_err,sup_f_err,sup_l_err,sup_hausdorff_EL\n";
    for (const auto& r : rows) {
        out += std::to_string(r.i) + ',' + format_number(r.sup_e_err) + ',' + format_number(r.sup_f_err) + ',' +
               format_number(r.sup_l_err) + ',' + format_number(r.sup_hausdorff_EL) + '\n';
    }
    return out;
}

StabilityReport representation_convergence(const PerturbationFamily& family, BuilderKind kind, const Window& window,
                                           const StabilityPlan& plan) {
    auto convex = check_family_convexity(family, window, plan.seed);
    if (!convex.pass)
        throw Error(ErrorCode::HypothesisViolation,
                    "perturbed Hamiltonians are not convex in p: " + convex.witnesses.dump());
    auto indices = family.indices;
    std::sort(indices.begin(), indices.end());
    if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "no indices");

    std::mt19937_64 rng(plan.seed);
    const auto pts = window_points(window, plan.points, rng);
    const int n = family.base.n;

    const auto limit = build_member(family, 0, kind, plan.policy);
    const auto as = limit.control.sample(plan.controls);
    const auto limit_spec = family_member(family, 0);
    const auto grid_spec = grid_spec_of(limit_spec);

    // e of the limit triple per (t,x) and control.
    std::vector<std::vector<Vec2>> e0(pts.size(), std::vector<Vec2>(as.size()));
    parallel_for(pts.size() * as.size(), [&](std::size_t k) {
        const std::size_t p = k / as.size(), j = k % as.size();
        e0[p][j] = limit.e(pts[p].first, pts[p].second, as[j]);
    });
    std::vector<ConvexGridFunction> L0;
    for (const auto& [t, x] : pts) L0.push_back(numeric_slice(limit_spec, grid_spec, t, x, plan.policy));

    StabilityReport out;
    out.window = describe(window);
    CheckReport bound;
    bound.check = "composition_bound";
    bound.tolerance = plan.bound_slack;
    bound.worst = -kInf;

    for (int i : indices) {
        const auto tri = build_member(family, i, kind, plan.policy);
        const auto spec_i = family_member(family, i);
        StabilityRow row;
        row.i = i;
        std::vector<std::vector<Vec2>> ei(pts.size(), std::vector<Vec2>(as.size()));
        parallel_for(pts.size() * as.size(), [&](std::size_t k) {
            const std::size_t p = k / as.size(), j = k % as.size();
            ei[p][j] = tri.e(pts[p].first, pts[p].second, as[j]);
        });
        for (std::size_t p = 0; p < pts.size(); ++p) {
            const auto [t, x] = pts[p];
            const auto Li = numeric_slice(spec_i, grid_spec, t, x, plan.policy);
            double cap = std::max(L0[p].min_value(), Li.min_value()) + 1.0;
            for (std::size_t j = 0; j < as.size(); ++j) cap = std::max({cap, e0[p][j].y + 1.0, ei[p][j].y + 1.0});
            const double hd = hausdorff(build_epigraph(Li, cap).body, build_epigraph(L0[p], cap).body);
            row.sup_hausdorff_EL = std::max(row.sup_hausdorff_EL, hd);
            const double dM = std::abs(tri.M(t, x) - limit.M(t, x));
            for (std::size_t j = 0; j < as.size(); ++j) {
                const Vec2 d = ei[p][j] - e0[p][j];
                const double err = norm(d);
                row.sup_e_err = std::max(row.sup_e_err, err);
                row.sup_f_err = std::max(row.sup_f_err, std::abs(d.x));
                row.sup_l_err = std::max(row.sup_l_err, std::abs(d.y));
                double anorm = 0.0;
                for (double c : as[j]) anorm += c * c;
                const double rhs = 5.0 * (n + 1) * (hd + dM * std::sqrt(anorm));
                const double m = err - rhs;
                bound.worst = std::max(bound.worst, m);
                if (m > bound.tolerance)
                    bound.add_witness({{"i", i}, {"t", t}, {"x", x}, {"a", as[j]}, {"err", err}, {"rhs", rhs}});
            }
        }
        out.rows.push_back(row);
    }

    if (bound.worst == -kInf) bound.worst = 0.0;
    bound.pass = bound.worst <= bound.tolerance;
    bound.verdict = bound.pass ? "pass" : "fail";

    CheckReport& rep = out.check;
    rep.check = "representation_convergence";
    const double first = out.rows.front().sup_e_err, last = out.rows.back().sup_e_err;
    rep.worst = last;
    rep.tolerance = plan.decay_ratio * first;
    rep.pass = last <= plan.decay_ratio * first;
    for (const auto& r : out.rows)
        rep.add_witness({{"i", r.i}, {"sup_e_err", r.sup_e_err}, {"sup_hausdorff_EL", r.sup_hausdorff_EL}}, 64);
    rep.absorb(bound);
    rep.verdict = rep.pass ? "pass" : "fail";
    return out;
}

StabilityReport fixed_t_convergence(const PerturbationFamily& family, double t, const Window& window,
                                    const StabilityPlan& plan, BuilderKind kind) {
    Window w = window;
    w.t_lo = w.t_hi = t;
    auto rep = representation_convergence(family, kind, w, plan);
    rep.check.check = "fixed_t_convergence";
    return rep;
}

CheckReport epigraph_limit_check(const PerturbationFamily& family, const Window& window, const EpigraphLimitPlan& plan) {
    CheckReport rep;
    rep.check = "epigraph_limit";
    auto indices = family.indices;
    std::sort(indices.begin(), indices.end());
    if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "no indices");

    std::mt19937_64 rng(plan.seed);
    const auto bases = window_points(window, plan.base_points, rng);
    const auto limit_spec = family_member(family, 0);
    const auto grid_spec = grid_spec_of(limit_spec);
    struct Seq {
        double t, x, st, sx;
    };
    std::vector<Seq> seqs;
    for (const auto& [t, x] : bases)
        for (int k = 0; k < plan.sequences; ++k)
            seqs.push_back({t, x, plan.moving ? draw(rng, -0.5, 0.5) * (window.t_hi - window.t_lo) : 0.0,
                            plan.moving ? draw(rng, -0.5, 0.5) : 0.0});

    // Probe points per base point, and the limit distances.
    std::vector<std::vector<Vec2>> probes(bases.size());
    std::vector<std::vector<double>> d0(bases.size());
    for (std::size_t b = 0; b < bases.size(); ++b) {
        const auto [t, x] = bases[b];
        const auto L = numeric_slice(limit_spec, grid_spec, t, x, plan.policy);
        const double W = L.grid().hi, m = L.min_value();
        for (int k = 0; k < plan.probes; ++k) {
            Vec2 y{draw(rng, -W, W), draw(rng, m - 1.0, m + 3.0)};
            probes[b].push_back(y);
            d0[b].push_back(distance(y, epigraph_for_distance(L, y)));
        }
    }

    std::vector<double> errs;
    for (int i : indices) {
        const auto spec_i = family_member(family, i);
        std::vector<double> per_seq(seqs.size(), 0.0);
        parallel_for(seqs.size(), [&](std::size_t s) {
            const auto& q = seqs[s];
            const std::size_t b = s / static_cast<std::size_t>(plan.sequences);
            const double ti = std::clamp(q.t + q.st / i, window.t_lo, window.t_hi);
            const double xi = std::clamp(q.x + q.sx / i, window.x_lo, window.x_hi);
            const auto L = numeric_slice(spec_i, grid_spec, ti, xi, plan.policy);
            double worst = 0.0;
            for (std::size_t k = 0; k < probes[b].size(); ++k) {
                const Vec2 y = probes[b][k];
                worst = std::max(worst, std::abs(distance(y, epigraph_for_distance(L, y)) - d0[b][k]));
            }
            per_seq[s] = worst;
        });
        errs.push_back(*std::max_element(per_seq.begin(), per_seq.end()));
        rep.add_witness({{"i", i}, {"error", errs.back()}}, 64);
    }
    rep.worst = errs.back();
    rep.tolerance = std::min(plan.decay_ratio * errs.front(), plan.absolute);
    rep.pass = errs.back() <= plan.decay_ratio * errs.front() && errs.back() <= plan.absolute;
    rep.verdict = rep.pass ? "pass" : "fail";

    // Advisory: the members may fail to be convex in p.
    auto convex = check_family_convexity(family, window, plan.seed);
    if (!convex.pass)
        convex.verdict = "flagged: members not convex in p; the numeric conjugate uses their convex hull";
    rep.children.push_back(convex);
    return rep;
}

CheckReport normalized_limit_check(const PerturbationFamily& family, const Window& window,
                                   const EpigraphLimitPlan& plan) {
    CheckReport rep;
    rep.check = "normalized_limit";
    auto indices = family.indices;
    std::sort(indices.begin(), indices.end());
    if (indices.empty()) throw Error(ErrorCode::InvalidArgument, "no indices");
    std::mt19937_64 rng(plan.seed);
    const auto pts = window_points(window, 3 * plan.base_points, rng);
    const auto limit_spec = family_member(family, 0);
    const auto grid_spec = grid_spec_of(limit_spec);
    std::vector<ConvexGridFunction> L0;
    for (const auto& [t, x] : pts) L0.push_back(numeric_slice(limit_spec, grid_spec, t, x, plan.policy));

    std::vector<double> hds, nrms;
    for (int i : indices) {
        const auto spec_i = family_member(family, i);
        std::vector<double> hd(pts.size()), nrm(pts.size());
        parallel_for(pts.size(), [&](std::size_t k) {
            const auto [t, x] = pts[k];
            const auto Li = numeric_slice(spec_i, grid_spec, t, x, plan.policy);
            const double cap = std::max(Li.min_value(), L0[k].min_value()) + 2.0;
            hd[k] = hausdorff(build_epigraph(Li, cap).body, build_epigraph(L0[k], cap).body);
            double m = 0.0;
            for (int j = -400; j <= 400; ++j) {
                const double p = j * 0.05;
                m = std::max(m, std::abs(spec_i.eval(t, x, p) - limit_spec.eval(t, x, p)) / (1.0 + std::abs(p)));
            }
            nrm[k] = m;
        });
        hds.push_back(*std::max_element(hd.begin(), hd.end()));
        nrms.push_back(*std::max_element(nrm.begin(), nrm.end()));
        rep.add_witness({{"i", i}, {"sup_hausdorff_EL", hds.back()}, {"sup_normalized_dH", nrms.back()}}, 64);
    }
    rep.worst = hds.back();
    rep.tolerance = plan.decay_ratio * hds.front();
    rep.pass = hds.back() <= plan.decay_ratio * hds.front() && nrms.back() <= plan.decay_ratio * nrms.front();
    rep.verdict = rep.pass ? "pass" : "fail";
    return rep;
}

CheckReport intersection_limit_check(std::uint64_t seed, int corpus, double ratio) {
    CheckReport rep;
    rep.check = "intersection_limit";
    rep.tolerance = ratio;
    rep.worst = 0.0;
    std::mt19937_64 rng(seed);
    auto polygon = [&](Vec2 c, double r) {
        std::vector<Vec2> pts;
        for (int k = 0; k < 8; ++k) {
            const double th = draw(rng, 0.0, 2.0 * std::numbers::pi), rad = r * std::sqrt(draw(rng, 0.2, 1.0));
            pts.push_back(c + Vec2{std::cos(th), std::sin(th)} * rad);
        }
        return ConvexPolygon::hull(pts);
    };
    auto centroid = [](const ConvexPolygon& p) {
        Vec2 s{0, 0};
        for (const auto& v : p.vertices()) s = s + v;
        return s * (1.0 / static_cast<double>(p.size()));
    };
    auto perturbed = [&](const ConvexPolygon& p, int i, Vec2 shift) {
        const Vec2 c = centroid(p);
        std::vector<Vec2> pts;
        for (const auto& v : p.vertices()) pts.push_back(c + (v - c) * (1.0 + 1.0 / i) + shift * (1.0 / i));
        return ConvexPolygon::hull(pts);
    };
    int used = 0;
    for (int guard = 0; used < corpus && guard < 50 * corpus; ++guard) {
        const auto K = polygon({draw(rng, -3, 3), draw(rng, -3, 3)}, draw(rng, 1.0, 3.0));
        const Vec2 cK = centroid(K);
        const auto D = polygon(cK + Vec2{draw(rng, -0.5, 0.5), draw(rng, -0.5, 0.5)}, draw(rng, 1.0, 3.0));
        // K must meet the interior of D: require the centroid of K well inside D.
        if (distance(cK, D) > 0.0 || !contains_body(D, ConvexPolygon::regular({cK, 0.05}, 16), 0.0)) continue;
        ++used;
        const auto KD = intersect(K, D);
        const Vec2 sK{draw(rng, -1, 1), draw(rng, -1, 1)}, sD{draw(rng, -1, 1), draw(rng, -1, 1)};
        std::vector<double> errs;
        for (int i : {4, 16, 64}) errs.push_back(hausdorff(intersect(perturbed(K, i, sK), perturbed(D, i, sD)), KD));
        const double r = errs.front() > 0.0 ? errs.back() / errs.front() : 0.0;
        rep.worst = std::max(rep.worst, r);
        if (r > ratio) rep.add_witness({{"case", used}, {"errors", errs}});
    }
    rep.pass = used == corpus && rep.worst <= ratio;
    rep.verdict = rep.pass ? "pass" : "fail";
    return rep;
}

}  // namespace hamrep
