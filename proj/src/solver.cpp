#include "torusflux/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "torusflux/fft.hpp"
#include "torusflux/flux.hpp"
#include "torusflux/kernels.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

namespace {

using Spec = std::vector<cplx>;

// radial 2/3-band mask applied in place
void truncate_band(const TorusGrid& g, Spec& s, int ncomp) {
    const double band2 = g.dealias_radius() * g.dealias_radius();
    const std::size_t m = g.size();
    for (int c = 0; c < ncomp; ++c) {
        cplx* o = s.data() + static_cast<std::size_t>(c) * m;
        for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
            if (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] > band2) o[i] = cplx{0.0, 0.0};
        });
    }
}

struct Workspace {
    const TorusGrid* grid = nullptr;
    std::vector<cplx> a, b;

    void synth(std::span<const cplx> spec, std::vector<double>& out) {
        const std::size_t m = grid->size();
        a.resize(m);
        fft::backward(spec, a, grid->dim(), grid->n());
        out.resize(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = a[i].real();
    }
    void analyze(std::span<const double> phys, std::span<cplx> spec) {
        const std::size_t m = grid->size();
        a.resize(m);
        for (std::size_t i = 0; i < m; ++i) a[i] = cplx{phys[i], 0.0};
        b.resize(m);
        fft::forward(a, b, grid->dim(), grid->n());
        const double inv = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < m; ++i) spec[i] = b[i] * inv;
    }
};

// 2D: d/dt omega = -v . grad omega
Spec rhs_2d(const TorusGrid& g, const Spec& w, Workspace& ws, double* max_speed) {
    const std::size_t m = g.size();
    Spec vx(m), vy(m), dx(m), dy(m);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1];
        const cplx I{0.0, 1.0};
        if (k2 == 0.0) {
            vx[i] = vy[i] = cplx{0.0, 0.0};
        } else {
            vx[i] = I * k[1] * w[i] / k2;
            vy[i] = -I * k[0] * w[i] / k2;
        }
        dx[i] = I * k[0] * w[i];
        dy[i] = I * k[1] * w[i];
    });
    std::vector<double> pvx, pvy, pdx, pdy;
    ws.synth(vx, pvx);
    ws.synth(vy, pvy);
    ws.synth(dx, pdx);
    ws.synth(dy, pdy);
    if (max_speed) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            s = std::max(s, pvx[i] * pvx[i] + pvy[i] * pvy[i]);
        *max_speed = std::sqrt(s);
    }
    std::vector<double> nl(m);
    const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < mm; ++i) nl[i] = -(pvx[i] * pdx[i] + pvy[i] * pdy[i]);
    Spec out(m);
    ws.analyze(nl, out);
    truncate_band(g, out, 1);
    return out;
}

// 3D rotational form: d/dt v = P[v x omega], gradients absorbed by the projection
Spec rhs_3d(const TorusGrid& g, const Spec& v, Workspace& ws, double* max_speed) {
    const std::size_t m = g.size();
    Spec omega(3 * m);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const cplx I{0.0, 1.0};
        omega[i] = I * (k[1] * v[2 * m + i] - k[2] * v[m + i]);
        omega[m + i] = I * (k[2] * v[i] - k[0] * v[2 * m + i]);
        omega[2 * m + i] = I * (k[0] * v[m + i] - k[1] * v[i]);
    });
    std::vector<double> pv[3], pw[3];
    for (int c = 0; c < 3; ++c) {
        ws.synth(std::span<const cplx>(v).subspan(static_cast<std::size_t>(c) * m, m), pv[c]);
        ws.synth(std::span<const cplx>(omega).subspan(static_cast<std::size_t>(c) * m, m), pw[c]);
    }
    if (max_speed) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            s = std::max(s, pv[0][i] * pv[0][i] + pv[1][i] * pv[1][i] + pv[2][i] * pv[2][i]);
        *max_speed = std::sqrt(s);
    }
    std::vector<double> cross(m);
    Spec out(3 * m);
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < mm; ++i)
            cross[i] = pv[a][i] * pw[b][i] - pv[b][i] * pw[a][i];
        ws.analyze(cross, std::span<cplx>(out).subspan(static_cast<std::size_t>(c) * m, m));
    }
    // Leray projection
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) return;
        cplx kd = (k[0] * out[i] + k[1] * out[m + i] + k[2] * out[2 * m + i]) / k2;
        out[i] -= k[0] * kd;
        out[m + i] -= k[1] * kd;
        out[2 * m + i] -= k[2] * kd;
    });
    truncate_band(g, out, 3);
    return out;
}

Spec eval_rhs(const TorusGrid& g, const Spec& y, int dim, Workspace& ws, double* max_speed) {
    return dim == 2 ? rhs_2d(g, y, ws, max_speed) : rhs_3d(g, y, ws, max_speed);
}

Spec combine(const Spec& y, double h, const Spec& k) {
    Spec out(y);
    kernels::axpy(out, h, std::span<const cplx>(k));
    return out;
}

SimState state_from_spec(const TorusGrid& g, int ncomp, Spec s, double t) {
    return SimState{t, TorusField::from_spectral(g, ncomp, std::move(s))};
}

} // namespace

TorusField SimState::velocity() const {
    return dim() == 2 ? velocity_from_vorticity_2d(state) : state;
}

double SimState::energy() const {
    if (dim() == 3) return state.energy();
    const auto& g = state.grid();
    auto w = state.spectral(0);
    std::vector<double> partial(g.size(), 0.0);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1];
        if (k2 > 0.0)
            partial[i] = (w[i].real() * w[i].real() + w[i].imag() * w[i].imag()) / k2;
    });
    double s = 0.0;
    for (double v : partial) s += v;
    return 0.5 * g.volume() * s;
}

double SimState::enstrophy() const {
    if (dim() != 2) throw std::logic_error("enstrophy: 2D state expected");
    return 0.5 * state.grid().volume() * kernels::sum_abs2(state.spectral_all());
}

double SimState::helicity() const {
    if (dim() != 3) throw std::logic_error("helicity: 3D state expected");
    return integral_pairing(state, curl(state));
}

SimState make_state(const TorusField& velocity, double t) {
    const auto& g = velocity.grid();
    if (velocity.ncomp() != g.dim())
        throw std::invalid_argument("make_state: velocity field expected");
    if (!velocity.is_divergence_free())
        throw std::invalid_argument("make_state: initial data must be divergence-free");
    TorusField v = dealias(velocity);
    if (g.dim() == 2) return SimState{t, curl(v)};
    return SimState{t, std::move(v)};
}

SimState step(const SimState& s, double dt) {
    const auto& g = s.state.grid();
    const int dim = g.dim();
    const int ncomp = s.state.ncomp();
    Workspace ws;
    ws.grid = &g;

    auto y = Spec(s.state.spectral_all().begin(), s.state.spectral_all().end());
    double max_speed = 0.0;
    Spec k1 = eval_rhs(g, y, dim, ws, &max_speed);
    if (max_speed > 0.0) {
        const double cfl_dt = 0.5 * g.spacing() / max_speed;
        if (dt > cfl_dt)
            throw std::runtime_error("step: CFL violation, use dt <= " + std::to_string(cfl_dt));
    }
    Spec k2 = eval_rhs(g, combine(y, 0.5 * dt, k1), dim, ws, nullptr);
    Spec k3 = eval_rhs(g, combine(y, 0.5 * dt, k2), dim, ws, nullptr);
    Spec k4 = eval_rhs(g, combine(y, dt, k3), dim, ws, nullptr);

    Spec out(y);
    kernels::axpy(out, dt / 6.0, std::span<const cplx>(k1));
    kernels::axpy(out, dt / 3.0, std::span<const cplx>(k2));
    kernels::axpy(out, dt / 3.0, std::span<const cplx>(k3));
    kernels::axpy(out, dt / 6.0, std::span<const cplx>(k4));
    return state_from_spec(g, ncomp, std::move(out), s.t + dt);
}

RunResult run(const TorusField& initial, const RunOptions& opts) {
    if (!(opts.T > 0.0) || !(opts.dt > 0.0)) throw std::invalid_argument("run: T, dt must be > 0");
    if (!(opts.snapshot_every > 0.0))
        throw std::invalid_argument("run: snapshot_every must be positive (or infinite)");
    SimState s = make_state(initial, 0.0);
    const auto& g = s.state.grid();
    const std::int64_t nsteps =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(opts.T / opts.dt - 1e-12)));
    const double dt = opts.T / static_cast<double>(nsteps);

    RunResult out;

    DyadicPartition part(g);
    std::vector<Mollifier> molls;
    for (double eps : opts.probe_eps) molls.emplace_back(g, eps);

    // One-step Richardson estimate of the stepping error scaled to the
    // horizon, taken over the energy functionals the budgets assert.
    {
        SimState full = step(s, dt);
        SimState half = step(step(s, 0.5 * dt), 0.5 * dt);
        const double e0 = s.energy();
        double err = std::abs(full.energy() - half.energy());
        TorusField vf = full.velocity();
        TorusField vh = half.velocity();
        for (int N : opts.probe_N) {
            const double a = 0.5 * g.volume() * kernels::sum_abs2(part.low_pass(vf, N).spectral_all());
            const double b = 0.5 * g.volume() * kernels::sum_abs2(part.low_pass(vh, N).spectral_all());
            err = std::max(err, std::abs(a - b));
        }
        for (const auto& mo : molls) {
            const double a = 0.5 * g.volume() * kernels::sum_abs2(mo.apply(vf).spectral_all());
            const double b = 0.5 * g.volume() * kernels::sum_abs2(mo.apply(vh).spectral_all());
            err = std::max(err, std::abs(a - b));
        }
        const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::max(e0, 1.0);
        out.time_stepping_error =
            std::max((16.0 / 15.0) * err, floor) * static_cast<double>(nsteps);
    }
    for (int N : opts.probe_N)
        out.lp_probes.push_back(ProbeResult{static_cast<double>(N), 0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < opts.probe_eps.size(); ++i)
        out.moll_probes.push_back(ProbeResult{opts.probe_eps[i], 0.0, 0.0, 0.0});

    auto half_filtered_sq = [&](const SimState& st) {
        TorusField v = st.velocity();
        for (std::size_t i = 0; i < opts.probe_N.size(); ++i) {
            TorusField sv = part.low_pass(v, opts.probe_N[i]);
            double val = 0.5 * g.volume() * kernels::sum_abs2(sv.spectral_all());
            if (st.t == 0.0) out.lp_probes[i].first = val;
            out.lp_probes[i].last = val;
        }
        for (std::size_t i = 0; i < molls.size(); ++i) {
            TorusField ve = molls[i].apply(v);
            double val = 0.5 * g.volume() * kernels::sum_abs2(ve.spectral_all());
            if (st.t == 0.0) out.moll_probes[i].first = val;
            out.moll_probes[i].last = val;
        }
    };

    auto probe_rates = [&](const SimState& st, double weight) {
        if (opts.probe_N.empty() && molls.empty()) return;
        TorusField v = st.velocity();
        if (!opts.probe_N.empty()) {
            auto T = velocity_products(v);
            for (std::size_t i = 0; i < opts.probe_N.size(); ++i)
                out.lp_probes[i].integral +=
                    weight * energy_flux_LP_from_products(T, v, opts.probe_N[i], part);
        }
        for (std::size_t i = 0; i < molls.size(); ++i)
            out.moll_probes[i].integral += weight * energy_flux_moll(v, molls[i]);
    };

    const bool probing = !opts.probe_N.empty() || !molls.empty();
    Workspace ws;
    ws.grid = &g;
    const int dim = g.dim();
    const int ncomp = s.state.ncomp();

    out.snapshots.push_back(Snapshot{0.0, s.velocity()});
    out.budgets.push_back(
        BudgetSample{0, 0.0, s.energy(), dim == 2 ? s.enstrophy() : s.helicity(), 0.0});
    half_filtered_sq(s);

    double next_snapshot = opts.snapshot_every;
    for (std::int64_t istep = 0; istep < nsteps; ++istep) {
        // RK4 with flux integrals accumulated at the stage states
        auto y = Spec(s.state.spectral_all().begin(), s.state.spectral_all().end());
        double max_speed = 0.0;
        Spec k1 = eval_rhs(g, y, dim, ws, &max_speed);
        if (max_speed > 0.0) {
            const double cfl_dt = 0.5 * g.spacing() / max_speed;
            if (dt > cfl_dt)
                throw std::runtime_error("run: CFL violation at step " + std::to_string(istep) +
                                         ", use dt <= " + std::to_string(cfl_dt));
        }
        if (probing) probe_rates(s, dt / 6.0);
        Spec y2 = combine(y, 0.5 * dt, k1);
        Spec k2 = eval_rhs(g, y2, dim, ws, nullptr);
        if (probing) probe_rates(state_from_spec(g, ncomp, std::move(y2), s.t + 0.5 * dt), dt / 3.0);
        Spec y3 = combine(y, 0.5 * dt, k2);
        Spec k3 = eval_rhs(g, y3, dim, ws, nullptr);
        if (probing) probe_rates(state_from_spec(g, ncomp, std::move(y3), s.t + 0.5 * dt), dt / 3.0);
        Spec y4 = combine(y, dt, k3);
        Spec k4 = eval_rhs(g, y4, dim, ws, nullptr);
        if (probing) probe_rates(state_from_spec(g, ncomp, std::move(y4), s.t + dt), dt / 6.0);

        Spec ynew(y);
        kernels::axpy(ynew, dt / 6.0, std::span<const cplx>(k1));
        kernels::axpy(ynew, dt / 3.0, std::span<const cplx>(k2));
        kernels::axpy(ynew, dt / 3.0, std::span<const cplx>(k3));
        kernels::axpy(ynew, dt / 6.0, std::span<const cplx>(k4));
        s = state_from_spec(g, ncomp, std::move(ynew), (istep + 1 == nsteps) ? opts.T
                                                                             : (istep + 1) * dt);

        const double e = s.energy();
        if (!std::isfinite(e))
            throw std::runtime_error("run: NaN detected at step " + std::to_string(istep + 1));
        out.budgets.push_back(BudgetSample{istep + 1, s.t, e,
                                           dim == 2 ? s.enstrophy() : s.helicity(),
                                           max_speed * dt / g.spacing()});

        const bool last = (istep + 1 == nsteps);
        if (last || (std::isfinite(opts.snapshot_every) && s.t >= next_snapshot - 1e-12)) {
            out.snapshots.push_back(Snapshot{s.t, s.velocity()});
            while (std::isfinite(opts.snapshot_every) && next_snapshot <= s.t + 1e-12)
                next_snapshot += opts.snapshot_every;
        }
    }
    half_filtered_sq(s);
    out.steps = nsteps;
    return out;
}

} // namespace torusflux
