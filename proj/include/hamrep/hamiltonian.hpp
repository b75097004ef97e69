#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hamrep/fenchel.hpp"

namespace hamrep {

struct ModulusData {
    // Growth constant c(t); nullopt when the growth condition fails.
    std::function<std::optional<double>(double t)> c;
    std::function<double(double R, double t)> k;
    std::function<double(double R, double t, double r)> w;
    std::string null_set_note;
};

struct LambdaBound {
    std::function<double(double t, double x)> eval;
    // x-modulus of eval; may be empty when only estimated.
    std::function<double(double R, double t, double r)> w;
};

struct HypothesisFlags {
    bool growth = true;   // |H(t,x,p)-H(t,x,q)| <= c(t)(1+|x|)|p-q|
    bool hlc = true;      // local Lipschitz-type condition in x
    std::string blc;      // "yes", "no", or a qualified note
};

struct HamiltonianSpec {
    std::string name;
    std::string formula;
    std::function<double(double t, double x, double p)> eval;
    double t_lo = 0.0;
    double t_hi = 1.0;
    int n = 1;
    ModulusData modulus;
    HypothesisFlags flags;
    // Closed-form Lagrangian and its domain; empty when unknown.
    std::function<double(double t, double x, double v)> oracle_L;
    std::function<EffectiveDomain(double t, double x)> oracle_dom;
    std::function<double(double t, double x)> lambda_bound;
    // Competing closed form that disagrees with the derived oracle.
    std::function<double(double t, double x, double v)> alternate_L;
    std::string notes;

    std::optional<double> c(double t) const {
        return modulus.c ? modulus.c(t) : std::nullopt;
    }
};

enum class LagrangianMode { automatic, oracle, numeric };

struct NumericConjugation {
    double p_window = 50.0;
    std::size_t p_count = 10001;
};

// H(t,x,.) sampled on [-P, P].
ConvexGridFunction hamiltonian_slice(const HamiltonianSpec& spec, double t, double x,
                                     const NumericConjugation& nc = {});
// L(t,x,.) on v_grid: oracle samples when available (automatic/oracle), otherwise the
// numeric conjugate with escaped nodes stored as +inf. Throws InvalidArgument when
// oracle mode is requested without an oracle.
ConvexGridFunction lagrangian_slice(const HamiltonianSpec& spec, double t, double x, const UniformGrid& v_grid,
                                    LagrangianMode mode = LagrangianMode::automatic,
                                    const NumericConjugation& nc = {});

// Default v-window half-width c(t)(1+|x|)+1, or fallback when c is absent.
double v_half_width(const HamiltonianSpec& spec, double t, double x, double fallback = 5.0);

}  // namespace hamrep
