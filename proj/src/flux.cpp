#include "torusflux/flux.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflux/kernels.hpp"
#include "torusflux/norms.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

namespace {

void require_divergence_free(const TorusField& v, const char* who) {
    if (v.ncomp() != v.grid().dim())
        throw std::invalid_argument(std::string(who) + ": vector field expected");
    if (!v.is_divergence_free())
        throw std::invalid_argument(std::string(who) + ": divergence-free input required");
}

// sum_k mult2(k) Re(a(k) conj(i k_j b(k))), the S_N-sandwiched pairing
double lowpass_pairing(const TorusGrid& g, std::span<const double> mult,
                       std::span<const cplx> a, std::span<const cplx> b, int deriv_axis) {
    const std::size_t m = g.size();
    std::vector<double> partial(m, 0.0);
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        const double w = mult[i] * mult[i];
        if (w == 0.0) return;
        // Re(a * conj(i k b)) = k * Im(a conj(b)) ... careful:
        // conj(i k b) = -i k conj(b); Re(a * (-i) conj(b)) k = k Im(a conj(b))
        const cplx p = a[i] * std::conj(b[i]);
        partial[i] = w * k[static_cast<std::size_t>(deriv_axis)] * p.imag();
    });
    double s = 0.0;
    for (double v : partial) s += v;
    return g.volume() * s;
}

} // namespace

double energy_flux_LP(const TorusField& v, int N, const DyadicPartition& part) {
    require_divergence_free(v, "energy_flux_LP");
    const auto& g = v.grid();
    if (N < 0 || N > part.j_max()) throw std::out_of_range("energy_flux_LP: N out of range");
    const int d = g.dim();
    const std::size_t m = g.size();

    auto rho = part.lowpass_multiplier_array(N);
    // w_i = (I - S_N^2) v_i
    std::vector<TorusField> vi, wi;
    for (int c = 0; c < d; ++c) {
        vi.push_back(component(v, c));
        std::vector<cplx> ws(m);
        auto s = vi.back().spectral(0);
        for (std::size_t i = 0; i < m; ++i) ws[i] = (1.0 - rho[i] * rho[i]) * s[i];
        wi.push_back(TorusField::from_spectral(g, 1, std::move(ws)));
    }

    double acc = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            TorusField u = dealiased_product(vi[static_cast<std::size_t>(j)], wi[static_cast<std::size_t>(i)]);
            acc += lowpass_pairing(g, rho, u.spectral(0), vi[static_cast<std::size_t>(i)].spectral(0), j);
        }
    return -acc;
}

std::vector<TorusField> velocity_products(const TorusField& v) {
    const int d = v.grid().dim();
    std::vector<TorusField> vi;
    for (int c = 0; c < d; ++c) vi.push_back(component(v, c));
    std::vector<TorusField> T(static_cast<std::size_t>(d * d), TorusField(v.grid(), 1));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            TorusField t = dealiased_product(vi[static_cast<std::size_t>(i)], vi[static_cast<std::size_t>(j)]);
            T[static_cast<std::size_t>(i * d + j)] = t;
            if (i != j) T[static_cast<std::size_t>(j * d + i)] = std::move(t);
        }
    return T;
}

double energy_flux_LP_from_products(const std::vector<TorusField>& T, const TorusField& v, int N,
                                    const DyadicPartition& part) {
    const auto& g = v.grid();
    const int d = g.dim();
    if (N < 0 || N > part.j_max())
        throw std::out_of_range("energy_flux_LP_from_products: N out of range");
    auto rho = part.lowpass_multiplier_array(N);
    double acc = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            acc += lowpass_pairing(g, rho, T[static_cast<std::size_t>(i * d + j)].spectral(0),
                                   v.spectral(i), j);
    return -acc;
}

double energy_flux_moll(const TorusField& v, const Mollifier& m) {
    require_divergence_free(v, "energy_flux_moll");
    const int d = v.grid().dim();
    std::vector<TorusField> vi, vie;
    for (int c = 0; c < d; ++c) {
        vi.push_back(component(v, c));
        vie.push_back(m.apply(vi.back()));
    }
    double acc = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            TorusField comm = add_scaled(
                m.apply(dealiased_product(vi[static_cast<std::size_t>(i)], vi[static_cast<std::size_t>(j)])), -1.0,
                dealiased_product(vie[static_cast<std::size_t>(i)], vie[static_cast<std::size_t>(j)]));
            acc += integral_pairing(comm, partial_derivative(vie[static_cast<std::size_t>(i)], j));
        }
    return acc;
}

double helicity_flux_LP(const TorusField& v, int N, const DyadicPartition& part) {
    require_divergence_free(v, "helicity_flux_LP");
    const auto& g = v.grid();
    if (g.dim() != 3) throw std::invalid_argument("helicity_flux_LP: dim 3 required");
    if (N < 0 || N > part.j_max()) throw std::out_of_range("helicity_flux_LP: N out of range");

    TorusField omega = curl(v);
    TorusField som = part.low_pass(omega, N);
    std::vector<TorusField> vi, svi;
    for (int c = 0; c < 3; ++c) {
        vi.push_back(component(v, c));
        svi.push_back(part.low_pass(vi.back(), N));
    }
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            TorusField t = part.low_pass(dealiased_product(vi[static_cast<std::size_t>(i)], vi[static_cast<std::size_t>(j)]), N);
            TorusField st = dealiased_product(svi[static_cast<std::size_t>(i)], svi[static_cast<std::size_t>(j)]);
            TorusField diff = add_scaled(t, -1.0, st);
            acc += integral_pairing(diff, partial_derivative(component(som, i), j));
        }
    return 2.0 * acc;
}

double helicity_flux_LP_cross(const TorusField& v, int N, const DyadicPartition& part) {
    require_divergence_free(v, "helicity_flux_LP_cross");
    const auto& g = v.grid();
    if (g.dim() != 3) throw std::invalid_argument("helicity_flux_LP_cross: dim 3 required");
    if (N < 0 || N > part.j_max())
        throw std::out_of_range("helicity_flux_LP_cross: N out of range");

    TorusField omega = curl(v);
    TorusField som = part.low_pass(omega, N);
    TorusField sv = part.low_pass(v, N);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int a = (i + 1) % 3, b = (i + 2) % 3;
        // (omega x v)_i, alias-free, then low-passed
        TorusField c1 = part.low_pass(
            add_scaled(dealiased_product(component(omega, a), component(v, b)), -1.0,
                       dealiased_product(component(omega, b), component(v, a))),
            N);
        // (S_N omega x S_N v)_i
        TorusField c2 = add_scaled(dealiased_product(component(som, a), component(sv, b)), -1.0,
                                   dealiased_product(component(som, b), component(sv, a)));
        acc += integral_pairing(add_scaled(c1, -1.0, c2), component(som, i));
    }
    return -2.0 * acc;
}

double helicity_flux_moll(const TorusField& v, const Mollifier& m) {
    require_divergence_free(v, "helicity_flux_moll");
    if (v.grid().dim() != 3) throw std::invalid_argument("helicity_flux_moll: dim 3 required");
    TorusField ome = m.apply(curl(v));
    std::vector<TorusField> vi, vie;
    for (int c = 0; c < 3; ++c) {
        vi.push_back(component(v, c));
        vie.push_back(m.apply(vi.back()));
    }
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            TorusField comm = add_scaled(
                m.apply(dealiased_product(vi[static_cast<std::size_t>(i)], vi[static_cast<std::size_t>(j)])), -1.0,
                dealiased_product(vie[static_cast<std::size_t>(i)], vie[static_cast<std::size_t>(j)]));
            acc += integral_pairing(comm, partial_derivative(component(ome, i), j));
        }
    return 2.0 * acc;
}

namespace {

// log-log fit over |values| with entries at the rounding floor dropped
double scan_slope(std::span<const double> xs, std::span<const double> values) {
    double vmax = 0.0;
    for (double w : values) vmax = std::max(vmax, std::abs(w));
    std::vector<double> mags;
    for (double w : values)
        mags.push_back(std::abs(w) > 1e-13 * vmax ? std::abs(w) : 0.0);
    try {
        return fit_log2_slope(xs, mags);
    } catch (const std::exception&) {
        return 0.0;
    }
}

} // namespace

FluxSeries flux_scan_LP(const TorusField& v, const DyadicPartition& part, bool helicity) {
    FluxSeries out;
    out.kind = helicity ? "helicity_LP" : "energy_LP";
    std::vector<double> xs;
    for (int N = 0; N <= part.j_max(); ++N) {
        out.index.push_back(N);
        xs.push_back(std::pow(2.0, N));
        out.values.push_back(helicity ? helicity_flux_LP(v, N, part)
                                      : energy_flux_LP(v, N, part));
    }
    out.slope = scan_slope(xs, out.values);
    return out;
}

FluxSeries flux_scan_moll(const TorusField& v, std::span<const double> eps_list, bool helicity) {
    FluxSeries out;
    out.kind = helicity ? "helicity_moll" : "energy_moll";
    for (double eps : eps_list) {
        Mollifier m(v.grid(), eps);
        out.index.push_back(eps);
        out.values.push_back(helicity ? helicity_flux_moll(v, m) : energy_flux_moll(v, m));
    }
    out.slope = scan_slope(out.index, out.values);
    return out;
}

double gamma_convolution(std::span<const double> d, int j_lo, double alpha, int N) {
    GammaKernel gamma{alpha};
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        s += gamma(N - (j_lo + static_cast<int>(i))) * d[i];
    return s;
}

GammaBound gamma_bound(std::span<const double> d, std::span<const double> dtilde, double alpha,
                       double beta, double theta, int N, int j_lo) {
    GammaBound out;
    const bool energy_form = std::isnan(beta);
    out.exponent = energy_form ? 2.0 - alpha - theta * alpha : 1.0 - beta - theta * alpha;
    out.criticality_warning = std::abs(out.exponent) > 1e-9;
    const double conv1 = gamma_convolution(d, j_lo, alpha, N);
    const double conv2 = energy_form ? gamma_convolution(d, j_lo, alpha, N)
                                     : gamma_convolution(dtilde.empty() ? d : dtilde, j_lo,
                                                         beta, N);
    out.value = std::pow(2.0, out.exponent * N) * std::pow(conv1, theta) * conv2;
    return out;
}

double TimeWindow::value(double t) const {
    const double u = (2.0 * t - (t0 + t1)) / (t1 - t0);
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

double TimeWindow::derivative(double t) const {
    const double u = (2.0 * t - (t0 + t1)) / (t1 - t0);
    if (std::abs(u) >= 1.0) return 0.0;
    const double s = 1.0 - u * u;
    return std::exp(-1.0 / s) * (-2.0 * u / (s * s)) * (2.0 / (t1 - t0));
}

namespace {

// pressure from -lap Pi = div div (v (x) v), with alias-free products
TorusField pressure_field(const TorusField& v) {
    const auto& g = v.grid();
    const int d = g.dim();
    const std::size_t m = g.size();
    std::vector<cplx> pi(m, cplx{0.0, 0.0});
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            TorusField t = dealiased_product(component(v, i), component(v, j));
            auto ts = t.spectral(0);
            const double fac = (i == j) ? 1.0 : 2.0;
            for_each_mode(g, [&](std::size_t idx, const std::array<double, 3>& k) {
                const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if (k2 == 0.0) return;
                pi[idx] += -fac * k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(j)] * ts[idx] / k2;
            });
        }
    return TorusField::from_spectral(g, 1, std::move(pi));
}

} // namespace

double weak_solution_residual(const Trajectory& traj, const TorusField& test_field,
                              const TimeWindow& window) {
    if (traj.size() < 2) throw std::invalid_argument("weak_solution_residual: need >= 2 snapshots");
    const auto& g = test_field.grid();
    if (g != traj.front().v.grid())
        throw std::invalid_argument("weak_solution_residual: incompatible grids");
    if (test_field.ncomp() != g.dim())
        throw std::invalid_argument("weak_solution_residual: vector test field expected");

    const int d = g.dim();
    std::vector<TorusField> grad_psi; // d_j psi_i, row-major (i,j)
    for (int i = 0; i < d; ++i) {
        TorusField psi_i = component(test_field, i);
        for (int j = 0; j < d; ++j) grad_psi.push_back(partial_derivative(psi_i, j));
    }
    TorusField div_psi = divergence(test_field);
    TorusField scalar_test = component(test_field, 0);
    TorusField grad_scalar = gradient(scalar_test);

    std::vector<double> ts, momentum_integrand, divfree_integrand;
    for (const auto& snap : traj) {
        const TorusField& v = snap.v;
        if (v.grid() != g) throw std::invalid_argument("weak_solution_residual: incompatible grids");
        const double w = window.value(snap.t);
        const double wd = window.derivative(snap.t);

        double a = integral_pairing(v, test_field); // int v . psi
        double b = 0.0;
        if (w != 0.0) {
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    TorusField t = dealiased_product(component(v, i), component(v, j));
                    b += integral_pairing(t, grad_psi[static_cast<std::size_t>(i * d + j)]);
                }
            b += integral_pairing(pressure_field(v), div_psi);
        }
        ts.push_back(snap.t);
        momentum_integrand.push_back(wd * a + w * b);
        divfree_integrand.push_back(w * integral_pairing(v, grad_scalar));
    }

    auto trapz = [&](const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 1; i < ts.size(); ++i)
            s += 0.5 * (y[i] + y[i - 1]) * (ts[i] - ts[i - 1]);
        return s;
    };
    return std::max(std::abs(trapz(momentum_integrand)), std::abs(trapz(divfree_integrand)));
}

} // namespace torusflux
