#ifndef TORUSFLUX_SOLVER_HPP
#define TORUSFLUX_SOLVER_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "torusflux/field.hpp"
#include "torusflux/partition.hpp"

namespace torusflux {

// Pseudo-spectral incompressible Euler stepper. 2D evolves scalar vorticity
// with velocity recovered from the streamfunction; 3D evolves the velocity in
// rotational form with a Leray projection. Nonlinear terms are truncated to
// the radial 2/3 band every evaluation, which makes the semi-discrete scheme
// conserve energy (and enstrophy in 2D, helicity in 3D) exactly; observed
// drift comes from the RK4 stage alone.
struct SimState {
    double t = 0.0;
    TorusField state; // 2D: scalar vorticity; 3D: divergence-free velocity

    int dim() const { return state.grid().dim(); }
    TorusField velocity() const;
    double energy() const;
    double enstrophy() const; // 2D only
    double helicity() const;  // 3D only
};

SimState make_state(const TorusField& velocity, double t = 0.0);

// one classical RK4 step; throws on CFL violation (dt > 0.5 h / max|v|)
SimState step(const SimState& s, double dt);

struct BudgetSample {
    std::int64_t step = 0;
    double t = 0.0;
    double energy = 0.0;
    double second = 0.0; // enstrophy (2D) or helicity (3D)
    double cfl = 0.0;    // max|v| dt / h at the step start
};

struct Snapshot {
    double t = 0.0;
    TorusField v; // velocity
};
using Trajectory = std::vector<Snapshot>;

// scale-budget probe: accumulates the time integral of a flux functional with
// the same RK4 stage weights the stepper uses, so the quadrature error of the
// integral matches the stepper's own order
struct ProbeResult {
    double index = 0.0;    // N or eps
    double integral = 0.0; // int_0^T flux dt
    double first = 0.0;    // (1/2)||S_N v(0)||^2 resp. (1/2)||v^eps(0)||^2
    double last = 0.0;     // same at t = T
};

struct RunOptions {
    double T = 1.0;
    double dt = 1e-2;
    double snapshot_every = std::numeric_limits<double>::infinity(); // inf: endpoints only
    std::vector<int> probe_N;        // Littlewood-Paley energy budget probes
    std::vector<double> probe_eps;   // mollified energy budget probes
};

struct RunResult {
    Trajectory snapshots;
    std::vector<BudgetSample> budgets; // every step
    std::vector<ProbeResult> lp_probes;
    std::vector<ProbeResult> moll_probes;
    double time_stepping_error = 0.0; // Richardson estimate scaled to the horizon
    std::int64_t steps = 0;
};

RunResult run(const TorusField& initial, const RunOptions& opts);

} // namespace torusflux

#endif
