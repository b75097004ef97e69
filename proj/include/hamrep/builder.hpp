#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hamrep/fenchel.hpp"
#include "hamrep/hamiltonian.hpp"
#include "hamrep/report.hpp"
#include "hamrep/representation.hpp"

namespace hamrep {

struct GridPolicy {
    std::size_t v_count = 401;          // v-grid nodes per (t,x) slice
    int steiner_dirs = kDefaultSteinerDirections;
    LagrangianMode mode = LagrangianMode::automatic;
    NumericConjugation conjugation;
    double fallback_half_width = 5.0;   // v-window half-width when c(t) is absent
    std::size_t lift_count = 101;       // lift controls per (t,x)
};

// v-grid of a slice: symmetric, with 0 as a node.
UniformGrid slice_grid(const HamiltonianSpec& spec, double t, double x, const GridPolicy& policy);

// A = R^2, e(t,x,a) = steiner(P(a, E_L(t,x))).
// Throws HypothesisViolation when the spec is not flagged with the Lipschitz condition in x.
RepresentationTriple build_noncompact(const HamiltonianSpec& spec, const GridPolicy& policy = {});

// A = unit ball of R^2, e(t,x,a) = steiner(P(M(t,x) a, E_L(t,x))) with
// M = |lambda| + |H(t,x,0)| + c(t)(1+|x|) + 1.
// Throws MissingC without c(t); BLCViolation when a slice has L > lambda on its domain
// (checked at a probe set during the build and again for every slice evaluated).
RepresentationTriple build_compact(const HamiltonianSpec& spec, const LambdaBound& lam,
                                   const GridPolicy& policy = {});

// max over the plan's controls (plus lift points) of p f - l.
double reconstruct_H(const RepresentationTriple& triple, double t, double x, double p, const ControlPlan& plan = {});

struct ImageEstimate {
    EffectiveDomain image;  // interval hull of sampled f(t,x,a)
    EffectiveDomain dom;    // dom L(t,x,.) on the policy grid
    double gap = 0.0;       // Hausdorff distance between the closures
};

ImageEstimate image_of_controls(const RepresentationTriple& triple, double t, double x,
                                const ControlPlan& plan = {}, const GridPolicy& policy = {});

// E_{lambda,L}(t,x) inside hull(e-samples) inside E_L(t,x), both within tol.
CheckReport check_sandwich(const RepresentationTriple& triple, const LambdaBound& lam, double t, double x, double tol,
                           const ControlPlan& plan = {}, const GridPolicy& policy = {});

struct Window {
    double t_lo = 0.0, t_hi = 1.0;
    double x_lo = -1.0, x_hi = 1.0;
    double p_lo = -3.0, p_hi = 3.0;
};

struct VerifyPlan {
    std::uint64_t seed = 1;
    int points = 12;      // sampled (t,x) for the pointwise checks
    int pairs = 200;      // sampled pairs for the Lipschitz check
    ControlPlan controls{21, 3.0, 8, 32, 8};
    double image_tolerance = 0.05;
};

// Six checks: l lower bound, |f| bound, Lipschitz pairs in two forms, e in E_L, image gap.
CheckReport verify_triple(const RepresentationTriple& triple, const Window& window, const VerifyPlan& plan = {},
                          const GridPolicy& policy = {});

struct TracePoint {
    double t, x;
    Control a;
};
// CSV `t,x,a1,a2,f,l`.
std::string trace_csv(const RepresentationTriple& triple, const std::vector<TracePoint>& points);

}  // namespace hamrep
