#include "hamrep/hamiltonian.hpp"

#include <cmath>

#include "hamrep/errors.hpp"

namespace hamrep {

ConvexGridFunction hamiltonian_slice(const HamiltonianSpec& spec, double t, double x, const NumericConjugation& nc) {
    auto grid = UniformGrid::make(-nc.p_window, nc.p_window, nc.p_count);
    return ConvexGridFunction::sample(grid, [&](double p) { return spec.eval(t, x, p); }, true);
}

ConvexGridFunction lagrangian_slice(const HamiltonianSpec& spec, double t, double x, const UniformGrid& v_grid,
                                    LagrangianMode mode, const NumericConjugation& nc) {
    bool use_oracle = mode == LagrangianMode::oracle ||
                      (mode == LagrangianMode::automatic && static_cast<bool>(spec.oracle_L));
    if (use_oracle) {
        if (!spec.oracle_L) throw Error(ErrorCode::InvalidArgument, spec.name + " has no Lagrangian oracle");
        return ConvexGridFunction::sample(v_grid, [&](double v) { return spec.oracle_L(t, x, v); }, true);
    }
    ConjugateOptions opts;
    opts.mark_escapes = true;
    return conjugate(hamiltonian_slice(spec, t, x, nc), v_grid, opts);
}

double v_half_width(const HamiltonianSpec& spec, double t, double x, double fallback) {
    auto c = spec.c(t);
    return c ? *c * (1.0 + std::abs(x)) + 1.0 : fallback;
}

}  // namespace hamrep
