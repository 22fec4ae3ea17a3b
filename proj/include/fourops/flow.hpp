#pragma once

#include <utility>

#include "fourops/operator_l.hpp"

namespace fourops {

/// Conserved functional
///   Q[u,v] = int ( 48 v^2 + 5/4 u^4 - 12 u^2 v - 40 u v'' - 13 u u'^2 + 9 u''^2 ) dx.
/// Requires decaying potentials (declared asymptotic limits all zero).
double q_functional(const PotentialPair& pp);

/// Exact drop of Q when one doubly degenerate level -4 kappa^4 is removed:
/// -(2^14/7) kappa^7.
double delta_q_predicted(double kappa);

double delta_q_measured(const PotentialPair& pp, const PotentialPair& pp_tilde);

/// Right-hand sides of the coupled flow
///   u_t = 10 u''' + 6 u u' - 24 v'
///   v_t = 3 (u''''' + u u''' + u' u'') - 8 v''' - 6 u v'.
std::pair<GridFunction, GridFunction> flow_rhs(const GridFunction& u, const GridFunction& v,
                                               DiffScheme scheme);

struct EvolutionState {
    double t = 0.0;
    GridFunction u;  // periodic grid
    GridFunction v;
    double q_initial = 0.0;
    double q_current = 0.0;
};

EvolutionState make_evolution_state(const GridFunction& u, const GridFunction& v);

/// Advance n_steps of size dt with an exponential integrator: the stiff
/// linear part (a 2x2 system per Fourier mode) is propagated by its exact
/// exponential, the nonlinear remainder by ETDRK4 stages.
EvolutionState evolve(const EvolutionState& state, double dt, int n_steps);

}  // namespace fourops
