#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hamrep/builder.hpp"
#include "hamrep/report.hpp"

namespace hamrep {

struct PerturbationFamily {
    HamiltonianSpec base;
    // H_i = base + perturb(i, t, x, p); empty means no perturbation.
    std::function<double(int i, double t, double x, double p)> perturb;
    std::vector<int> indices{4, 16, 64};
    // Compact builds: lambda_i(t,x) and c_i(t); index 0 is the limit.
    std::function<double(int i, double t, double x)> lambda;
    std::function<std::optional<double>(int i, double t)> c;
    std::string description;
};

// Named families: ex_2_1_sin, ex_2_2_shift (compact), ex_3_4_abs, ex_2_2_cos,
// ex_2_2_growth and ex_2_2_zero (no perturbation).
PerturbationFamily standard_family(const std::string& name);
std::vector<std::string> standard_family_names();

// H_i as a spec; i = 0 is the base. Perturbed members have no Lagrangian oracle.
HamiltonianSpec family_member(const PerturbationFamily& family, int i);

// Sampled midpoint convexity of every H_i in p over the window.
CheckReport check_family_convexity(const PerturbationFamily& family, const Window& window, std::uint64_t seed = 1);

enum class BuilderKind { noncompact, compact };

struct StabilityPlan {
    std::uint64_t seed = 1;
    int points = 8;                         // sampled (t,x)
    ControlPlan controls{9, 3.0, 3, 12, 8};  // controls per (t,x)
    GridPolicy policy = numeric_policy();
    double decay_ratio = 0.3;
    double bound_slack = 5e-3;

    static GridPolicy numeric_policy() {
        GridPolicy p;
        p.mode = LagrangianMode::numeric;
        return p;
    }
};

struct StabilityRow {
    int i = 0;
    double sup_e_err = 0.0;
    double sup_f_err = 0.0;
    double sup_l_err = 0.0;
    double sup_hausdorff_EL = 0.0;
};

struct StabilityReport {
    std::string window;
    std::vector<StabilityRow> rows;  // sorted by i
    CheckReport check;               // decay verdict with the composition bound as a child

    std::string to_csv() const;
};

// Builds the limit triple and one triple per index on identical grids and
// measures sup errors over the sampled window. Throws HypothesisViolation when
// a member fails the convexity probe or the compact kind lacks lambda_i.
StabilityReport representation_convergence(const PerturbationFamily& family, BuilderKind kind, const Window& window,
                                           const StabilityPlan& plan = {});
// The same with t fixed.
StabilityReport fixed_t_convergence(const PerturbationFamily& family, double t, const Window& window,
                                    const StabilityPlan& plan = {}, BuilderKind kind = BuilderKind::noncompact);

struct EpigraphLimitPlan {
    std::uint64_t seed = 1;
    int sequences = 4;       // seeded (t_i, x_i) -> (t, x) per base point
    int base_points = 3;
    int probes = 24;         // probe points y
    bool moving = true;      // false keeps (t_i, x_i) = (t, x)
    GridPolicy policy = fine_policy();  // epigraph distances need a finer v-grid than the builders
    double decay_ratio = 0.3;
    double absolute = 0.05;

    static GridPolicy fine_policy() {
        GridPolicy p = StabilityPlan::numeric_policy();
        p.v_count = 1601;
        return p;
    }
};

// |d(y, E_{L_i}(t_i,x_i)) - d(y, E_L(t,x))| per index; passes when the last error is
// at most decay_ratio times the first and at most `absolute`. Non-convex members are
// flagged in a child report; their numeric conjugate is the conjugate of the convex hull.
CheckReport epigraph_limit_check(const PerturbationFamily& family, const Window& window,
                                 const EpigraphLimitPlan& plan = {});

// sup over the window of the truncated-epigraph Hausdorff distance per index, paired
// with the (1+|p|)-normalized sup of |H_i - H|; passes when both decay by decay_ratio.
CheckReport normalized_limit_check(const PerturbationFamily& family, const Window& window,
                                   const EpigraphLimitPlan& plan = {});

// Shrinking polygons K_i -> K, D_i -> D with K meeting the interior of D: the
// intersections converge (last Hausdorff error <= ratio x first) on a seeded corpus.
CheckReport intersection_limit_check(std::uint64_t seed = 1, int corpus = 20, double ratio = 0.3);

}  // namespace hamrep
