#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hamrep/geometry.hpp"
#include "hamrep/hamiltonian.hpp"

namespace hamrep {

using Control = std::vector<double>;

struct ControlPlan {
    int per_axis = 41;        // grid points per axis for intervals, boxes, full space
    double box_half = 3.0;    // full-space grids cover [-box_half, box_half]^dim
    int radial = 12;          // unit-ball rings
    int angular = 48;         // unit-ball and circle angles
    int simplex_denominator = 8;
};

enum class ControlKind { full_space, unit_ball, interval, box, circle, finite, simplex_product };

class ControlSet {
public:
    static ControlSet full_space(int dim);
    static ControlSet unit_ball(int dim);
    static ControlSet interval();                 // [-1, 1]
    static ControlSet box(int dim);               // [-1, 1]^dim
    static ControlSet circle();                   // unit circle in the plane
    static ControlSet finite(std::vector<Control> points);
    // A^atoms x simplex, encoded as atoms*dim(A) coordinates followed by atoms weights.
    static ControlSet simplex_product(const ControlSet& base, int atoms);

    ControlKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool compact() const { return kind_ != ControlKind::full_space; }
    const ControlSet* base() const { return base_.get(); }
    int atoms() const { return atoms_; }
    std::string describe() const;

    std::vector<Control> sample(const ControlPlan& plan) const;

private:
    ControlKind kind_ = ControlKind::finite;
    int dim_ = 1;
    std::vector<Control> points_;
    std::shared_ptr<const ControlSet> base_;
    int atoms_ = 0;
};

enum class Provenance { noncompact, compact, user_supplied };
const char* provenance_name(Provenance p);

struct RepresentationTriple {
    ControlSet control = ControlSet::interval();
    std::function<Vec2(double t, double x, const Control& a)> e;
    Provenance provenance = Provenance::user_supplied;
    std::shared_ptr<const HamiltonianSpec> source;
    // Extra deterministic controls for (t,x), added to every sampled plan.
    std::function<std::vector<Control>(double t, double x)> lift;
    // Scaling M(t,x) of the compact construction (1 otherwise).
    std::function<double(double t, double x)> scaling;

    double f(double t, double x, const Control& a) const { return e(t, x, a).x; }
    double l(double t, double x, const Control& a) const { return e(t, x, a).y; }
    double M(double t, double x) const { return scaling ? scaling(t, x) : 1.0; }
    // Plan samples followed by lift points.
    std::vector<Control> controls(double t, double x, const ControlPlan& plan) const;
};

}  // namespace hamrep
