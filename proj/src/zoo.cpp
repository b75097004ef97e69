#include "hamrep/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>

#include "hamrep/errors.hpp"

namespace hamrep {

namespace {

EffectiveDomain closed_interval(double lo, double hi) { return {lo, hi, true, true}; }

ModulusData modulus(std::optional<double> c, double k, bool w_linear) {
    ModulusData m;
    if (c) {
        double cv = *c;
        m.c = [cv](double) -> std::optional<double> { return cv; };
    } else {
        m.c = [](double) -> std::optional<double> { return std::nullopt; };
    }
    m.k = [k](double, double) { return k; };
    if (w_linear) m.w = [](double, double, double r) { return r; };
    else m.w = [](double, double, double) { return 0.0; };
    return m;
}

// Constants below are derived from the formula of each Hamiltonian:
//   c: Lipschitz constant in p divided by (1+|x|),
//   k, w: |H(t,x,p) - H(t,y,p)| <= k|p||x-y| + w(|x-y|).

HamiltonianSpec ex_2_1() {
    HamiltonianSpec s;
    s.name = "ex_2_1";
    s.formula = "H = max(|p||x| - 1, 0)";
    s.eval = [](double, double x, double p) { return std::max(std::abs(p) * std::abs(x) - 1.0, 0.0); };
    // |max(a,0) - max(b,0)| <= |a-b| = |p| ||x|-|y|| and |H_p| <= |x|.
    s.modulus = modulus(1.0, 1.0, false);
    s.oracle_L = [](double, double x, double v) {
        double ax = std::abs(x);
        if (ax == 0.0) return v == 0.0 ? 0.0 : kInf;
        return std::abs(v) <= ax ? std::abs(v) / ax : kInf;
    };
    s.oracle_dom = [](double, double x) { return closed_interval(-std::abs(x), std::abs(x)); };
    s.lambda_bound = [](double, double) { return 1.0; };
    s.flags.blc = "yes";
    return s;
}

HamiltonianSpec ex_2_2() {
    HamiltonianSpec s;
    s.name = "ex_2_2";
    s.formula = "H = sqrt(1 + p^2) - |x|";
    s.eval = [](double, double x, double p) { return std::sqrt(1.0 + p * p) - std::abs(x); };
    // Slope of sqrt(1+p^2) is below 1; the x-dependence is the 1-Lipschitz |x|.
    s.modulus = modulus(1.0, 0.0, true);
    s.oracle_L = [](double, double x, double v) {
        return std::abs(v) <= 1.0 ? -std::sqrt(1.0 - v * v) + std::abs(x) : kInf;
    };
    s.oracle_dom = [](double, double) { return closed_interval(-1.0, 1.0); };
    s.lambda_bound = [](double, double x) { return std::abs(x); };
    s.flags.blc = "yes";
    return s;
}

HamiltonianSpec ex_2_3() {
    HamiltonianSpec s;
    s.name = "ex_2_3";
    s.formula = "H = p - 1 - |x| for p >= -1, -2 sqrt(-p) - |x| for p < -1";
    s.eval = [](double, double x, double p) {
        return p >= -1.0 ? p - 1.0 - std::abs(x) : -2.0 * std::sqrt(-p) - std::abs(x);
    };
    // Slope in p is 1 for p >= -1 and 1/sqrt(-p) < 1 below; x enters through -|x|.
    s.modulus = modulus(1.0, 0.0, true);
    s.oracle_L = [](double, double x, double v) { return v > 0.0 && v <= 1.0 ? 1.0 / v + std::abs(x) : kInf; };
    s.oracle_dom = [](double, double) { return EffectiveDomain{0.0, 1.0, false, true}; };
    s.flags.blc = "no (L unbounded near v = 0)";
    return s;
}

HamiltonianSpec ex_2_4() {
    HamiltonianSpec s;
    s.name = "ex_2_4";
    s.formula = "H = (sqrt(|xp|) - 1)^2 for |xp| > 1, 0 otherwise";
    s.eval = [](double, double x, double p) {
        double q = std::abs(x * p);
        return q > 1.0 ? (std::sqrt(q) - 1.0) * (std::sqrt(q) - 1.0) : 0.0;
    };
    // g(q) = (sqrt q - 1)^2 on q > 1 has 0 <= g' < 1, so H is |p|-Lipschitz in |x|
    // and |x|-Lipschitz in p.
    s.modulus = modulus(1.0, 1.0, false);
    s.oracle_L = [](double, double x, double v) {
        double ax = std::abs(x);
        if (ax == 0.0) return v == 0.0 ? 0.0 : kInf;
        return std::abs(v) < ax ? std::abs(v) / (ax - std::abs(v)) : kInf;
    };
    s.oracle_dom = [](double, double x) {
        double ax = std::abs(x);
        if (ax == 0.0) return closed_interval(0.0, 0.0);
        return EffectiveDomain{-ax, ax, false, false};
    };
    s.flags.blc = "no (L unbounded near |v| = |x|)";
    return s;
}

HamiltonianSpec ex_2_5() {
    HamiltonianSpec s;
    s.name = "ex_2_5";
    s.formula = "H = p^2/(2+2t) - |x|";
    s.eval = [](double t, double x, double p) { return p * p / (2.0 + 2.0 * t) - std::abs(x); };
    s.modulus = modulus(std::nullopt, 0.0, true);
    s.flags.growth = false;
    // sup_p {vp - p^2/(2+2t)} is attained at p = (1+t)v.
    s.oracle_L = [](double t, double x, double v) { return (1.0 + t) * v * v / 2.0 + std::abs(x); };
    s.oracle_dom = [](double, double) { return EffectiveDomain{-kInf, kInf, false, false}; };
    s.alternate_L = [](double t, double x, double v) { return (1.0 + t) * v * v + std::abs(x); };
    s.flags.blc = "no (L unbounded on R)";
    s.notes = "alternate closed form (1+t)v^2+|x| differs from the conjugate (1+t)v^2/2+|x| by a factor 2";
    return s;
}

HamiltonianSpec ex_3_4() {
    HamiltonianSpec s;
    s.name = "ex_3_4";
    s.formula = "H = |x| max(|p| - |ln t|, 0) for t > 0, 0 at t = 0";
    s.eval = [](double t, double x, double p) {
        if (t <= 0.0) return 0.0;
        return std::abs(x) * std::max(std::abs(p) - std::abs(std::log(t)), 0.0);
    };
    // max(|p|-a, 0) <= |p| and is 1-Lipschitz in p.
    s.modulus = modulus(1.0, 1.0, false);
    s.oracle_L = [](double t, double x, double v) {
        double ax = t <= 0.0 ? 0.0 : std::abs(x);
        if (std::abs(v) > ax) return kInf;
        return t <= 0.0 ? 0.0 : std::abs(std::log(t)) * std::abs(v);
    };
    s.oracle_dom = [](double t, double x) {
        double ax = t <= 0.0 ? 0.0 : std::abs(x);
        return closed_interval(-ax, ax);
    };
    s.lambda_bound = [](double t, double x) { return t <= 0.0 ? 0.0 : std::abs(std::log(t)) * std::abs(x); };
    s.flags.blc = "per fixed t only (no bound continuous at t = 0)";
    return s;
}

HamiltonianSpec p_abs() {
    HamiltonianSpec s;
    s.name = "p_abs";
    s.formula = "H = |p|";
    s.eval = [](double, double, double p) { return std::abs(p); };
    s.modulus = modulus(1.0, 0.0, false);
    s.oracle_L = [](double, double, double v) { return std::abs(v) <= 1.0 ? 0.0 : kInf; };
    s.oracle_dom = [](double, double) { return closed_interval(-1.0, 1.0); };
    s.lambda_bound = [](double, double) { return 0.0; };
    s.flags.blc = "yes";
    return s;
}

std::shared_ptr<const HamiltonianSpec> shared_builtin(const std::string& name) {
    return std::make_shared<const HamiltonianSpec>(builtin(name));
}

double worst_relative(double lhs, double rhs) { return (lhs - rhs) / std::max(1.0, std::abs(rhs)); }

struct Sample {
    double t, x, y;
};

std::vector<Sample> draw_samples(const HamiltonianSpec& spec, double R, const SamplePlan& plan) {
    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> ut(spec.t_lo, spec.t_hi), ux(-R, R);
    std::vector<Sample> out;
    for (int i = 0; i < plan.triples; ++i) {
        double t = ut(rng), x = ux(rng), y = ux(rng);
        out.push_back({t, x, y});
    }
    return out;
}

UniformGrid mlc_grid(const HamiltonianSpec& spec, double t, double R, const SamplePlan& plan) {
    double W = v_half_width(spec, t, R, R + 5.0);
    return UniformGrid::make(-W, W, plan.v_count | 1);
}

// L(t,x,.) as a callable: the oracle when allowed, else a numeric slice.
struct LagrangianSource {
    const HamiltonianSpec& spec;
    const SamplePlan& plan;
    double R;
    std::map<std::pair<double, double>, ConvexGridFunction> cache;

    bool use_oracle() const {
        return plan.mode == LagrangianMode::oracle ||
               (plan.mode == LagrangianMode::automatic && static_cast<bool>(spec.oracle_L));
    }
    const ConvexGridFunction& slice(double t, double x) {
        auto key = std::make_pair(t, x);
        auto it = cache.find(key);
        if (it == cache.end()) {
            auto g = mlc_grid(spec, t, R, plan);
            it = cache.emplace(key, lagrangian_slice(spec, t, x, g, plan.mode, plan.conjugation)).first;
        }
        return it->second;
    }
    double L(double t, double x, double v) {
        return use_oracle() ? spec.oracle_L(t, x, v) : slice(t, x).eval(v);
    }
    EffectiveDomain dom(double t, double x) {
        if (use_oracle() && spec.oracle_dom) return spec.oracle_dom(t, x);
        return effective_domain(slice(t, x));
    }
};

}  // namespace

HamiltonianSpec builtin(const std::string& name) {
    if (name == "ex_2_1") return ex_2_1();
    if (name == "ex_2_2") return ex_2_2();
    if (name == "ex_2_3") return ex_2_3();
    if (name == "ex_2_4") return ex_2_4();
    if (name == "ex_2_5") return ex_2_5();
    if (name == "ex_3_4" || name == "ex_2_6") return ex_3_4();
    if (name == "p_abs") return p_abs();
    throw Error(ErrorCode::UnknownName, "unknown Hamiltonian '" + name + "'");
}

std::vector<std::string> builtin_names() {
    return {"ex_2_1", "ex_2_2", "ex_2_3", "ex_2_4", "ex_2_5", "ex_3_4", "p_abs"};
}

HamiltonianSpec with_scaled_modulus(const HamiltonianSpec& spec, double k_factor, double w_factor) {
    HamiltonianSpec s = spec;
    auto k = spec.modulus.k;
    auto w = spec.modulus.w;
    s.modulus.k = [k, k_factor](double R, double t) { return k_factor * k(R, t); };
    s.modulus.w = [w, w_factor](double R, double t, double r) { return w_factor * w(R, t, r); };
    return s;
}

CheckReport check_HLC(const HamiltonianSpec& spec, double R, const SamplePlan& plan) {
    if (!(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
    CheckReport rep;
    rep.check = "HLC";
    rep.tolerance = plan.hlc_tolerance;
    rep.worst = -kInf;
    for (const auto& s : draw_samples(spec, R, plan)) {
        const double r = std::abs(s.x - s.y);
        const double k = spec.modulus.k(R, s.t), w = spec.modulus.w(R, s.t, r);
        for (int j = 0; j < plan.p_values; ++j) {
            double p = -plan.p_max + 2.0 * plan.p_max * j / (plan.p_values - 1);
            double lhs = std::abs(spec.eval(s.t, s.x, p) - spec.eval(s.t, s.y, p));
            double rhs = k * std::abs(p) * r + w;
            double rel = worst_relative(lhs, rhs);
            if (rel > rep.worst) rep.worst = rel;
            if (rel > rep.tolerance)
                rep.add_witness({{"t", s.t}, {"x", s.x}, {"y", s.y}, {"p", p}, {"lhs", lhs}, {"rhs", rhs}});
        }
    }
    rep.pass = rep.worst <= rep.tolerance;
    return rep;
}

CheckReport check_LLC(const HamiltonianSpec& spec, double R, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "LLC";
    rep.tolerance = plan.llc_tolerance;
    rep.worst = -kInf;
    LagrangianSource src{spec, plan, R, {}};
    for (const auto& s : draw_samples(spec, R, plan)) {
        const double r = std::abs(s.x - s.y);
        const double rad = spec.modulus.k(R, s.t) * r, w = spec.modulus.w(R, s.t, r);
        const auto dx = src.dom(s.t, s.x), dy = src.dom(s.t, s.y);
        double lo = dx.lo, hi = dx.hi;
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            double W = v_half_width(spec, s.t, s.x, 3.0);
            lo = std::max(lo, -W);
            hi = std::min(hi, W);
        }
        const double shrink = 1e-3 * (hi - lo);
        if (!dx.lo_closed) lo += shrink;
        if (!dx.hi_closed) hi -= shrink;
        const int J = hi > lo ? plan.v_samples : 1;
        for (int j = 0; j < J; ++j) {
            double v = J == 1 ? lo : lo + (hi - lo) * j / (J - 1);
            double Lx = src.L(s.t, s.x, v);
            if (Lx == kInf) continue;
            const double slack = 1e-12 * (1.0 + std::abs(v));
            std::vector<double> cand{v};
            const int nsub = std::max(2, plan.u_subgrid);
            for (int m = 0; m < nsub; ++m) cand.push_back(v - rad + 2.0 * rad * m / (nsub - 1));
            // Second subgrid on the window clipped to dom L(t,y,.), which may be much narrower.
            const double clo = std::max(v - rad, dy.lo), chi = std::min(v + rad, dy.hi);
            if (chi > clo)
                for (int m = 0; m < nsub; ++m) cand.push_back(clo + (chi - clo) * m / (nsub - 1));
            for (double e : {dy.lo, dy.hi, std::clamp(v, dy.lo, dy.hi)}) {
                if (std::isfinite(e) && std::abs(e - v) <= rad + slack) cand.push_back(e);
            }
            double best = kInf, best_u = v;
            for (double u : cand) {
                double Ly = src.L(s.t, s.y, u);
                if (Ly < best) best = Ly, best_u = u;
            }
            double excess = best - Lx - w;
            if (excess > rep.worst) rep.worst = excess;
            if (excess > rep.tolerance)
                rep.add_witness({{"t", s.t}, {"x", s.x}, {"y", s.y}, {"v", v}, {"u", best_u},
                                 {"excess", json_number(excess)}});
        }
    }
    rep.pass = rep.worst <= rep.tolerance;
    return rep;
}

CheckReport check_MLC(const HamiltonianSpec& spec, double R, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "MLC";
    rep.worst = -kInf;
    bool pass = true;
    for (const auto& s : draw_samples(spec, R, plan)) {
        const auto grid = mlc_grid(spec, s.t, R, plan);
        const double tol = 2.0 * grid.spacing() + plan.mlc_slack;
        const double r = std::abs(s.x - s.y);
        const double k = spec.modulus.k(R, s.t), w = spec.modulus.w(R, s.t, r);
        auto Lx = lagrangian_slice(spec, s.t, s.x, grid, plan.mode, plan.conjugation);
        auto Ly = lagrangian_slice(spec, s.t, s.y, grid, plan.mode, plan.conjugation);
        double cap = Lx.min_value() + plan.cap_height;
        auto Ex = build_epigraph(Lx, cap);
        auto Ey = build_epigraph(Ly, std::max(cap + w + 1.0, Ly.min_value() + 1.0));
        auto inflated = minkowski_inflate(Ey.body, k * r, w);
        double ex = excess(Ex.body, inflated);
        rep.worst = std::max(rep.worst, ex - tol);
        if (ex > tol) {
            pass = false;
            rep.add_witness({{"t", s.t}, {"x", s.x}, {"y", s.y}, {"excess", ex}, {"tol", tol}});
        }
    }
    // worst is reported relative to the per-sample tolerance.
    rep.tolerance = 0.0;
    rep.pass = pass;
    rep.verdict = pass ? "pass" : "fail";
    return rep;
}

CheckReport check_epigraph_modulus(const HamiltonianSpec& spec, double R, const SamplePlan& plan) {
    CheckReport rep;
    rep.check = "epigraph_modulus";
    rep.worst = -kInf;
    for (const auto& s : draw_samples(spec, R, plan)) {
        const auto grid = mlc_grid(spec, s.t, R, plan);
        const double h = grid.spacing();
        const double r = std::abs(s.x - s.y);
        const double k = spec.modulus.k(R, s.t), w = spec.modulus.w(R, s.t, r);
        auto Lx = lagrangian_slice(spec, s.t, s.x, grid, plan.mode, plan.conjugation);
        auto Ly = lagrangian_slice(spec, s.t, s.y, grid, plan.mode, plan.conjugation);
        double cap = std::max(Lx.min_value(), Ly.min_value()) + plan.cap_height;
        double hd = hausdorff(build_epigraph(Lx, cap).body, build_epigraph(Ly, cap).body);
        double bound = 2.0 * k * r + 2.0 * w + 3.0 * h;
        rep.worst = std::max(rep.worst, hd - bound);
        if (hd > bound) rep.add_witness({{"t", s.t}, {"x", s.x}, {"y", s.y}, {"hausdorff", hd}, {"bound", bound}});
    }
    rep.pass = rep.worst <= 0.0;
    return rep;
}

RepresentationTriple family_p_abs(std::function<double(double)> h, std::function<double(double)> k) {
    RepresentationTriple tr;
    tr.control = ControlSet::interval();
    tr.e = [h, k](double, double x, const Control& a) {
        double av = a[0], hx = h(x), kx = k(x);
        return Vec2{av * (1.0 + std::abs(av) * hx) / (1.0 + hx), (1.0 - std::abs(av)) * kx};
    };
    tr.source = shared_builtin("p_abs");
    return tr;
}

RepresentationTriple hat_representation_ex_2_1() {
    RepresentationTriple tr;
    tr.control = ControlSet::box(2);
    tr.e = [](double, double x, const Control& a) {
        double a1 = std::abs(a[0]), a2 = std::abs(a[1]);
        return Vec2{a[0] * std::abs(x), a1 + a2 * (1.0 - a1)};
    };
    tr.source = shared_builtin("ex_2_1");
    return tr;
}

RepresentationTriple check_representation_ex_2_1() {
    RepresentationTriple tr;
    tr.control = ControlSet::interval();
    tr.e = [](double, double x, const Control& a) {
        return Vec2{a[0] * std::abs(x), x != 0.0 ? std::abs(a[0]) : 0.0};
    };
    tr.source = shared_builtin("ex_2_1");
    return tr;
}

RepresentationTriple circle_representation_ex_2_2() {
    RepresentationTriple tr;
    tr.control = ControlSet::circle();
    tr.e = [](double, double x, const Control& a) { return Vec2{a[0], a[1] + std::abs(x)}; };
    tr.source = shared_builtin("ex_2_2");
    return tr;
}

RepresentationTriple check_representation_ex_2_2() {
    RepresentationTriple tr;
    tr.control = ControlSet::interval();
    tr.e = [](double, double x, const Control& a) {
        return Vec2{a[0], -std::sqrt(std::max(0.0, 1.0 - a[0] * a[0])) + std::abs(x)};
    };
    tr.source = shared_builtin("ex_2_2");
    return tr;
}

}  // namespace hamrep
