#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hamrep/hamiltonian.hpp"
#include "hamrep/report.hpp"
#include "hamrep/representation.hpp"

namespace hamrep {

// Built-in names: ex_2_1 .. ex_2_5, ex_3_4 (alias ex_2_6), p_abs.
HamiltonianSpec builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Copy of spec with k and w multiplied by the given factors (mutation tests).
HamiltonianSpec with_scaled_modulus(const HamiltonianSpec& spec, double k_factor, double w_factor);

struct SamplePlan {
    std::uint64_t seed = 1;
    int triples = 64;         // sampled (t, x, y)
    int p_values = 33;        // equally spaced p in [-p_max, p_max]
    double p_max = 10.0;
    int v_samples = 17;       // v points per dom L(t,x,.) in the LLC search
    int u_subgrid = 201;      // candidate u per LLC window
    std::size_t v_count = 801;
    double cap_height = 3.0;  // epigraph cap above min L
    LagrangianMode mode = LagrangianMode::automatic;
    NumericConjugation conjugation;
    double hlc_tolerance = 1e-9;  // relative
    double llc_tolerance = 2e-2;  // search excess
    double mlc_slack = 5e-4;      // added to 2h
};

CheckReport check_HLC(const HamiltonianSpec& spec, double R, const SamplePlan& plan = {});
CheckReport check_LLC(const HamiltonianSpec& spec, double R, const SamplePlan& plan = {});
CheckReport check_MLC(const HamiltonianSpec& spec, double R, const SamplePlan& plan = {});
// Hausdorff distance of truncated epigraphs against 2k|x-y| + 2w + 3h.
CheckReport check_epigraph_modulus(const HamiltonianSpec& spec, double R, const SamplePlan& plan = {});

// f_h(x,a) = a(1+|a|h(x))/(1+h(x)), l_k(x,a) = (1-|a|)k(x), a in [-1,1]; represents |p|.
RepresentationTriple family_p_abs(std::function<double(double)> h, std::function<double(double)> k);
// f = a1|x|, l = |a1| + |a2|(1-|a1|) on [-1,1]^2; represents ex_2_1.
RepresentationTriple hat_representation_ex_2_1();
// f = a|x|, l = L(x, f) on [-1,1]; l is discontinuous in x at x = 0.
RepresentationTriple check_representation_ex_2_1();
// f = a1, l = a2 + |x| on the unit circle; represents ex_2_2.
RepresentationTriple circle_representation_ex_2_2();
// f = a, l = -sqrt(1-a^2) + |x| on [-1,1].
RepresentationTriple check_representation_ex_2_2();

}  // namespace hamrep
