#include "hamrep/representation.hpp"

#include <cmath>
#include <numbers>

#include "hamrep/errors.hpp"

namespace hamrep {

namespace {

std::vector<Control> cube_grid(int dim, int per_axis, double half) {
    if (per_axis < 2) throw Error(ErrorCode::InvalidArgument, "per_axis must be at least 2");
    std::vector<Control> out;
    std::vector<int> idx(dim, 0);
    while (true) {
        Control a(dim);
        for (int d = 0; d < dim; ++d) a[d] = -half + 2.0 * half * idx[d] / (per_axis - 1);
        out.push_back(std::move(a));
        int d = dim - 1;
        while (d >= 0 && ++idx[d] == per_axis) idx[d--] = 0;
        if (d < 0) break;
    }
    return out;
}

// All weight vectors with `atoms` entries k_i/den, sum k_i = den.
void compositions(int atoms, int remaining, int den, std::vector<int>& cur, std::vector<Control>& out) {
    if (static_cast<int>(cur.size()) == atoms - 1) {
        Control w;
        for (int k : cur) w.push_back(static_cast<double>(k) / den);
        w.push_back(static_cast<double>(remaining) / den);
        out.push_back(std::move(w));
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        cur.push_back(k);
        compositions(atoms, remaining - k, den, cur, out);
        cur.pop_back();
    }
}

}  // namespace

ControlSet ControlSet::full_space(int dim) {
    ControlSet c;
    c.kind_ = ControlKind::full_space;
    c.dim_ = dim;
    return c;
}

ControlSet ControlSet::unit_ball(int dim) {
    ControlSet c;
    c.kind_ = ControlKind::unit_ball;
    c.dim_ = dim;
    return c;
}

ControlSet ControlSet::interval() {
    ControlSet c;
    c.kind_ = ControlKind::interval;
    c.dim_ = 1;
    return c;
}

ControlSet ControlSet::box(int dim) {
    ControlSet c;
    c.kind_ = ControlKind::box;
    c.dim_ = dim;
    return c;
}

ControlSet ControlSet::circle() {
    ControlSet c;
    c.kind_ = ControlKind::circle;
    c.dim_ = 2;
    return c;
}

ControlSet ControlSet::finite(std::vector<Control> points) {
    if (points.empty()) throw Error(ErrorCode::InvalidArgument, "finite control set is empty");
    ControlSet c;
    c.kind_ = ControlKind::finite;
    c.dim_ = static_cast<int>(points.front().size());
    c.points_ = std::move(points);
    return c;
}

ControlSet ControlSet::simplex_product(const ControlSet& base, int atoms) {
    if (!base.compact()) throw Error(ErrorCode::NoncompactControl, "simplex product needs a compact base");
    if (atoms < 1) throw Error(ErrorCode::InvalidArgument, "need at least one atom");
    ControlSet c;
    c.kind_ = ControlKind::simplex_product;
    c.base_ = std::make_shared<const ControlSet>(base);
    c.atoms_ = atoms;
    c.dim_ = atoms * base.dim() + atoms;
    return c;
}

std::string ControlSet::describe() const {
    switch (kind_) {
        case ControlKind::full_space: return "full_space(" + std::to_string(dim_) + ")";
        case ControlKind::unit_ball: return "unit_ball(" + std::to_string(dim_) + ")";
        case ControlKind::interval: return "interval[-1,1]";
        case ControlKind::box: return "box[-1,1]^" + std::to_string(dim_);
        case ControlKind::circle: return "circle";
        case ControlKind::finite: return "finite(" + std::to_string(points_.size()) + ")";
        case ControlKind::simplex_product:
            return base_->describe() + "^" + std::to_string(atoms_) + "xsimplex";
    }
    return "unknown";
}

std::vector<Control> ControlSet::sample(const ControlPlan& plan) const {
    switch (kind_) {
        case ControlKind::full_space: return cube_grid(dim_, plan.per_axis, plan.box_half);
        case ControlKind::interval: return cube_grid(1, plan.per_axis, 1.0);
        case ControlKind::box: return cube_grid(dim_, plan.per_axis, 1.0);
        case ControlKind::finite: return points_;
        case ControlKind::circle: {
            std::vector<Control> out;
            for (int k = 0; k < plan.angular; ++k) {
                double th = 2.0 * std::numbers::pi * k / plan.angular;
                out.push_back({std::cos(th), std::sin(th)});
            }
            return out;
        }
        case ControlKind::unit_ball: {
            if (dim_ != 2) {
                std::vector<Control> out;
                for (auto& a : cube_grid(dim_, plan.per_axis, 1.0)) {
                    double s = 0.0;
                    for (double c : a) s += c * c;
                    if (s <= 1.0) out.push_back(std::move(a));
                }
                return out;
            }
            std::vector<Control> out{{0.0, 0.0}};
            for (int j = 1; j <= plan.radial; ++j) {
                double r = static_cast<double>(j) / plan.radial;
                for (int k = 0; k < plan.angular; ++k) {
                    double th = 2.0 * std::numbers::pi * k / plan.angular;
                    out.push_back({r * std::cos(th), r * std::sin(th)});
                }
            }
            return out;
        }
        case ControlKind::simplex_product: {
            auto atoms = base_->sample(plan);
            std::vector<Control> weights;
            std::vector<int> cur;
            compositions(atoms_, plan.simplex_denominator, plan.simplex_denominator, cur, weights);
            std::vector<Control> out;
            std::vector<std::size_t> idx(atoms_, 0);
            while (true) {
                for (const auto& w : weights) {
                    Control a;
                    for (int i = 0; i < atoms_; ++i) a.insert(a.end(), atoms[idx[i]].begin(), atoms[idx[i]].end());
                    a.insert(a.end(), w.begin(), w.end());
                    out.push_back(std::move(a));
                }
                int d = atoms_ - 1;
                while (d >= 0 && ++idx[d] == atoms.size()) idx[d--] = 0;
                if (d < 0) break;
            }
            return out;
        }
    }
    return {};
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::noncompact: return "noncompact";
        case Provenance::compact: return "compact";
        case Provenance::user_supplied: return "user-supplied";
    }
    return "unknown";
}

std::vector<Control> RepresentationTriple::controls(double t, double x, const ControlPlan& plan) const {
    auto out = control.sample(plan);
    if (lift) {
        auto extra = lift(t, x);
        out.insert(out.end(), extra.begin(), extra.end());
    }
    return out;
}

}  // namespace hamrep
