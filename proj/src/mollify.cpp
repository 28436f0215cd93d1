#include "torusflux/mollify.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflux/fft.hpp"
#include "torusflux/kernels.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

namespace {

// periodic distance of node index i from the origin along one axis
double axis_distance(int i, int n, double h) {
    int d = i <= n / 2 ? i : n - i;
    return d * h;
}

// dst[x] = src[x - s] with periodic wrap; n is a power of two
std::vector<double> rotate(const TorusGrid& g, std::span<const double> src,
                           const std::array<int, 3>& s) {
    const int n = g.n();
    const int mask = n - 1;
    std::vector<double> dst(g.size());
    if (g.dim() == 2) {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < n; ++i0) {
            const int j0 = (i0 - s[0]) & mask;
            const double* srow = src.data() + static_cast<std::size_t>(j0) * n;
            double* drow = dst.data() + static_cast<std::size_t>(i0) * n;
            for (int i1 = 0; i1 < n; ++i1) drow[i1] = srow[(i1 - s[1]) & mask];
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int i0 = 0; i0 < n; ++i0) {
            const int j0 = (i0 - s[0]) & mask;
            for (int i1 = 0; i1 < n; ++i1) {
                const int j1 = (i1 - s[1]) & mask;
                const double* srow =
                    src.data() + (static_cast<std::size_t>(j0) * n + static_cast<std::size_t>(j1)) * n;
                double* drow =
                    dst.data() + (static_cast<std::size_t>(i0) * n + static_cast<std::size_t>(i1)) * n;
                for (int i2 = 0; i2 < n; ++i2) drow[i2] = srow[(i2 - s[2]) & mask];
            }
        }
    }
    return dst;
}

} // namespace

Mollifier::Mollifier(const TorusGrid& grid, double eps) : grid_(grid), eps_(eps) {
    const double h = grid.spacing();
    if (!(eps > 0.0) || eps >= kTwoPi / 8.0)
        throw std::domain_error("Mollifier: eps must lie in (0, pi/4)");
    if (eps < 4.0 * h) throw std::domain_error("Mollifier: mollifier under-resolved");

    const std::size_t m = grid.size();
    const int n = grid.n();
    kernel_.assign(m, 0.0);
    double raw_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        auto idx = grid.unflatten(i);
        double r2 = 0.0;
        for (int a = 0; a < grid.dim(); ++a) {
            double d = axis_distance(idx[static_cast<std::size_t>(a)], n, h);
            r2 += d * d;
        }
        const double t2 = r2 / (eps * eps);
        if (t2 < 1.0) {
            kernel_[i] = std::exp(-1.0 / (1.0 - t2));
            raw_sum += kernel_[i];
        }
    }
    if (raw_sum == 0.0) throw std::domain_error("Mollifier: empty kernel support");
    const double cell = grid.cell_volume();
    const double scale = 1.0 / (raw_sum * cell);
    for (auto& v : kernel_) v *= scale;

    // spectral multiplier: h^dim * sum_y eta(y) e^{-i k.y}; real since the
    // sampled kernel is even under index negation
    std::vector<cplx> buf(m), hat(m);
    for (std::size_t i = 0; i < m; ++i) buf[i] = cplx{kernel_[i], 0.0};
    fft::forward(buf, hat, grid.dim(), n);
    kernel_hat_.resize(m);
    double imag_leak = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        kernel_hat_[i] = hat[i].real() * cell;
        imag_leak = std::max(imag_leak, std::abs(hat[i].imag()) * cell);
    }
    if (imag_leak > 1e-12)
        throw std::logic_error("Mollifier: sampled kernel lost its symmetry");

    // grid offsets inside the support, for the ball-integral form
    for (std::size_t i = 0; i < m; ++i) {
        if (kernel_[i] == 0.0) continue;
        auto idx = grid.unflatten(i);
        std::array<int, 3> s{0, 0, 0};
        for (int a = 0; a < grid.dim(); ++a) {
            int v = idx[static_cast<std::size_t>(a)];
            s[static_cast<std::size_t>(a)] = v <= n / 2 ? v : v - n;
        }
        support_.push_back(Offset{s, kernel_[i] * cell});
    }
}

TorusField Mollifier::apply(const TorusField& f) const {
    if (f.grid() != grid_) throw std::invalid_argument("Mollifier: grid mismatch");
    const std::size_t m = grid_.size();
    std::vector<cplx> out(m * static_cast<std::size_t>(f.ncomp()));
    for (int c = 0; c < f.ncomp(); ++c)
        kernels::apply_multiplier(std::span<cplx>(out).subspan(static_cast<std::size_t>(c) * m, m),
                                  f.spectral(c), kernel_hat_);
    return TorusField::from_spectral(grid_, f.ncomp(), std::move(out));
}

TorusField mollify(const TorusField& f, const Mollifier& m) { return m.apply(f); }

TorusField ceti_commutator(const TorusField& f, const TorusField& g, const Mollifier& m,
                           double* decomposition_error) {
    if (f.grid() != g.grid()) throw std::invalid_argument("ceti_commutator: grid mismatch");
    if (f.ncomp() != 1 || g.ncomp() != 1)
        throw std::invalid_argument("ceti_commutator: scalar fields expected (apply componentwise)");

    const std::size_t sz = f.grid().size();
    TorusField fg = pointwise_product(f, g);
    TorusField fe = m.apply(f);
    TorusField ge = m.apply(g);
    TorusField fge = m.apply(fg);

    std::vector<double> direct(sz);
    {
        auto a = fge.physical(0);
        auto b = fe.physical(0);
        auto c = ge.physical(0);
        const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(sz);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < mm; ++i) direct[i] = a[i] - b[i] * c[i];
    }

    // decomposition: ball increment integral minus (f - f^eps)(g - g^eps)
    std::vector<double> ball(sz, 0.0);
    auto fp = f.physical(0);
    auto gp = g.physical(0);
    for (const auto& off : m.support()) {
        if (off.shift[0] == 0 && off.shift[1] == 0 && off.shift[2] == 0) continue;
        auto fr = rotate(f.grid(), fp, off.shift);
        auto gr = rotate(f.grid(), gp, off.shift);
        kernels::accumulate_increment_product(ball, off.weight, fp, fr, gp, gr);
    }
    double max_abs = 0.0, max_err = 0.0;
    {
        auto feb = fe.physical(0);
        auto geb = ge.physical(0);
        for (std::size_t i = 0; i < sz; ++i) {
            const double decomposed = ball[i] - (fp[i] - feb[i]) * (gp[i] - geb[i]);
            max_abs = std::max(max_abs, std::abs(direct[i]));
            max_err = std::max(max_err, std::abs(decomposed - direct[i]));
        }
    }
    const double scale = std::max(max_abs, f.max_abs_physical() * g.max_abs_physical());
    const double rel = (scale > 0.0) ? max_err / scale : 0.0;
    if (decomposition_error) *decomposition_error = rel;
    if (rel > 1e-9)
        throw std::logic_error("ceti_commutator: decomposition self-check failed");

    return TorusField::from_physical(f.grid(), 1, std::move(direct));
}

std::vector<TorusField> tensor_commutator(const TorusField& v, const Mollifier& m) {
    const int d = v.ncomp();
    std::vector<TorusField> vi, vie;
    for (int c = 0; c < d; ++c) {
        vi.push_back(component(v, c));
        vie.push_back(m.apply(vi.back()));
    }
    // symmetric tensor: compute j >= i, mirror the rest
    std::vector<TorusField> comps(static_cast<std::size_t>(d * d), TorusField(v.grid(), 1));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            TorusField t = dealiased_product(vi[static_cast<std::size_t>(i)], vi[static_cast<std::size_t>(j)]);
            TorusField te = m.apply(t);
            TorusField ee = dealiased_product(vie[static_cast<std::size_t>(i)], vie[static_cast<std::size_t>(j)]);
            TorusField c = add_scaled(te, -1.0, ee);
            comps[static_cast<std::size_t>(i * d + j)] = c;
            if (i != j) comps[static_cast<std::size_t>(j * d + i)] = std::move(c);
        }
    return comps;
}

MollificationRates lemma22_rates(const TorusField& f, const BesovSpec& spec,
                                 std::span<const double> eps_list, int deriv_order) {
    if (deriv_order < 0 || deriv_order > 2)
        throw std::invalid_argument("lemma22_rates: derivative order must be 0, 1 or 2");
    if (eps_list.size() < 5)
        throw std::invalid_argument("lemma22_rates: ladder must have at least 5 values");
    MollificationRates out;
    const double q = spec.p;
    for (double eps : eps_list) {
        Mollifier m(f.grid(), eps);
        TorusField fe = m.apply(f);
        out.eps.push_back(eps);
        out.diff_lq.push_back(lebesgue_norm(add_scaled(fe, -1.0, f), q));
        if (deriv_order >= 1) {
            std::vector<TorusField> derivs;
            if (deriv_order == 1) {
                derivs = jacobian(fe);
            } else {
                for (const auto& dfe : jacobian(fe)) {
                    auto second = jacobian(dfe);
                    derivs.insert(derivs.end(), second.begin(), second.end());
                }
            }
            out.grad_lq.push_back(lebesgue_norm(derivs, q));
        }
    }
    out.diff_slope = fit_log2_slope(out.eps, out.diff_lq);
    if (!out.grad_lq.empty()) out.grad_slope = fit_log2_slope(out.eps, out.grad_lq);
    return out;
}

double lemma23_commutator_norm(const TorusField& v, const Mollifier& m, double theta, double p,
                               double q) {
    if (!(theta > 0.0) || theta > 2.0)
        throw std::domain_error("lemma23_commutator_norm: theta must lie in (0,2]");
    if (p <= 1.0 || q <= 2.0)
        throw std::domain_error("lemma23_commutator_norm: exponents out of range");
    const double s = q / (q - 1.0);
    auto comps = tensor_commutator(v, m);
    return lebesgue_norm(comps, s);
}

std::vector<std::pair<double, double>> lemma24_vanishing(const TorusField& f, const TorusField& g,
                                                         std::span<const double> eps_list,
                                                         CommutatorMode mode, double p1,
                                                         double p2) {
    if (f.grid() != g.grid()) throw std::invalid_argument("lemma24_vanishing: grid mismatch");
    const double qi = 1.0 / p1 + 1.0 / p2;
    const double q = 1.0 / qi;
    if (q < 1.0) throw std::domain_error("lemma24_vanishing: 1/p1 + 1/p2 must be <= 1");

    std::vector<std::pair<double, double>> out;
    for (double eps : eps_list) {
        Mollifier m(f.grid(), eps);
        double value = 0.0;
        if (mode == CommutatorMode::Product) {
            if (f.ncomp() != 1 || g.ncomp() != 1)
                throw std::invalid_argument("lemma24_vanishing: product mode expects scalars");
            TorusField t = dealiased_product(f, g);
            TorusField direct = add_scaled(m.apply(t), -1.0,
                                           dealiased_product(m.apply(f), m.apply(g)));
            value = lebesgue_norm(direct, q);
        } else {
            if (f.ncomp() != 3 || g.ncomp() != 3)
                throw std::invalid_argument("lemma24_vanishing: cross mode expects 3 components");
            TorusField fe = m.apply(f);
            TorusField ge = m.apply(g);
            std::vector<TorusField> comps;
            for (int i = 0; i < 3; ++i) {
                const int a = (i + 1) % 3, b = (i + 2) % 3;
                TorusField cr = add_scaled(dealiased_product(component(f, a), component(g, b)), -1.0,
                                           dealiased_product(component(f, b), component(g, a)));
                TorusField cre = add_scaled(dealiased_product(component(fe, a), component(ge, b)),
                                            -1.0,
                                            dealiased_product(component(fe, b), component(ge, a)));
                comps.push_back(add_scaled(m.apply(cr), -1.0, cre));
            }
            value = lebesgue_norm(comps, q);
        }
        out.emplace_back(eps, value);
    }
    return out;
}

std::vector<double> default_eps_ladder(const TorusGrid& grid, double lo_spacings,
                                       double hi_spacings) {
    const double h = grid.spacing();
    std::vector<double> out;
    const double ratio = std::sqrt(2.0);
    // clip to the admissible (0, pi/4) range on coarse grids
    double start = std::min(hi_spacings * h, 0.98 * kTwoPi / 8.0);
    for (double e = start; e >= lo_spacings * h * (1.0 - 1e-12); e /= ratio) out.push_back(e);
    return out;
}

} // namespace torusflux
