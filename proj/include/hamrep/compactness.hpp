#pragma once

#include <cstdint>
#include <vector>

#include "hamrep/builder.hpp"
#include "hamrep/report.hpp"
#include "hamrep/representation.hpp"

namespace hamrep {

enum class LSource { oracle, numeric };

struct CompactnessPlan {
    double t = 0.5;
    std::vector<double> xs{-1.0, -0.5, 0.0, 0.5, 1.0};
    ControlPlan controls{201, 3.0, 12, 360, 8};  // base controls for sups and images
    ControlPlan atom_controls{11, 3.0, 4, 48, 8};  // atoms of the convexified control set
    LSource l_source = LSource::oracle;
    NumericConjugation conjugation;
    std::uint64_t seed = 1;
    double tolerance = 2e-2;
};

// Worst L(t,x,f(t,x,a)) - l(t,x,a) over sampled (x,a); passes when <= tolerance.
// The numeric source conjugates the triple's own H(t,x,p) = sup_a {p f - l}.
CheckReport epigraph_bound_check(const RepresentationTriple& triple, const CompactnessPlan& plan = {});

// Closure of the sampled f(t,x,A) against the closure of dom L(t,x,.) (Hausdorff <= 0.05).
CheckReport check_domain_identity(const RepresentationTriple& triple, const CompactnessPlan& plan = {});

struct ConvexifiedTriple {
    RepresentationTriple base;
    // Control a = (a_1, ..., a_{n+1}, alpha_1, ..., alpha_{n+1}) with alpha in the simplex;
    // e(t,x,a) = sum_i alpha_i e_base(t,x,a_i).
    RepresentationTriple triple;
};

// Throws NoncompactControl for a noncompact base control set.
ConvexifiedTriple convexify(const RepresentationTriple& base);

// Images (f,l) of the convexified controls at (t,x), built from one evaluation per atom.
std::vector<Vec2> convexified_samples(const ConvexifiedTriple& ct, double t, double x, const ControlPlan& atom_plan);

// Reconstruction equality on seeded (x,p) and image hull against conv f(t,x,A).
CheckReport check_convexification(const ConvexifiedTriple& ct, const CompactnessPlan& plan = {});

struct LambdaEstimate {
    LambdaBound bound;            // lambda(t,x) = max of sampled l
    CheckReport certificate;      // sampled L <= lambda + tolerance on dom L
};

LambdaEstimate extract_lambda(const ConvexifiedTriple& ct, const CompactnessPlan& plan = {});

struct BLCProbe {
    std::vector<std::pair<double, double>> points{{0.5, 1.0}};  // (t, x)
    std::vector<double> margins{1e-1, 1e-2, 1e-3};
    double threshold = 1e3;
    int samples = 2001;
    LagrangianMode mode = LagrangianMode::automatic;
    std::size_t v_count = 4001;
    NumericConjugation conjugation;
};

inline constexpr const char* kBLCViolated = "BLC violated (diverging interior sup)";
inline constexpr const char* kBLCBounded = "bounded, candidate lambda found";

// Sup of L over dom L shrunk by each margin (an infinite end is cut at -+1/margin).
// Violated when the last sup reaches the threshold or the increments grow geometrically.
CheckReport detect_blc_failure(const HamiltonianSpec& spec, const BLCProbe& probe = {});

}  // namespace hamrep
