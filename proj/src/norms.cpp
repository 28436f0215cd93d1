#include "torusflux/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflux/kernels.hpp"
#include "torusflux/spectral_ops.hpp"

namespace torusflux {

namespace {

double lq_aggregate(std::span<const double> d, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : d) m = std::max(m, v);
        return m;
    }
    double s = 0.0;
    for (double v : d) s += std::pow(v, q);
    return std::pow(s, 1.0 / q);
}

} // namespace

double lebesgue_norm(const TorusField& f, double p) {
    if (p < 1.0) throw std::domain_error("lebesgue_norm: p must be >= 1");
    // rectangle rule on the oversampled grid agrees with Parseval at p = 2
    if (p == 2.0) return f.l2_norm();
    return oversample(f).lp(p);
}

double lebesgue_norm(std::span<const TorusField> comps, double p) {
    if (p < 1.0) throw std::domain_error("lebesgue_norm: p must be >= 1");
    if (comps.empty()) return 0.0;
    // gather oversampled samples of every scalar component into one block
    Oversampled all;
    std::size_t m = 0;
    for (const auto& f : comps) {
        Oversampled os = oversample(f);
        if (all.samples.empty()) {
            all.dim = os.dim;
            all.n = os.n;
            all.cell = os.cell;
            m = os.samples.size() / static_cast<std::size_t>(os.ncomp);
            all.samples.reserve(m * comps.size() * static_cast<std::size_t>(os.ncomp));
        }
        all.samples.insert(all.samples.end(), os.samples.begin(), os.samples.end());
    }
    all.ncomp = static_cast<int>(all.samples.size() / m);
    return all.lp(p);
}

BesovReport besov_norm(const TorusField& f, const BesovSpec& spec, const DyadicPartition& part) {
    BesovReport rep;
    rep.spec = spec;
    const int jmax = part.j_max();
    rep.dj.resize(static_cast<std::size_t>(jmax + 2));
    std::vector<double> hom_dj(static_cast<std::size_t>(jmax + 2));
    for (int j = -1; j <= jmax; ++j) {
        TorusField blk = part.block(f, j);
        rep.dj[static_cast<std::size_t>(j + 1)] =
            std::pow(2.0, spec.s * j) * lebesgue_norm(blk, spec.p);
        TorusField hom = part.homogeneous_block(f, j);
        hom_dj[static_cast<std::size_t>(j + 1)] =
            std::pow(2.0, spec.s * j) * lebesgue_norm(hom, spec.p);
    }
    const double q = (spec.qkind == QKind::Value) ? spec.q : kInf;
    rep.norm = lq_aggregate(rep.dj, q);
    rep.hom_norm = lq_aggregate(hom_dj, q);
    rep.lp_part = lebesgue_norm(f, spec.p);
    rep.equiv_norm = rep.lp_part + rep.hom_norm;

    const int scales = jmax + 2;
    const int third = (scales + 2) / 3;
    rep.tail_sup = 0.0;
    for (int i = scales - third; i < scales; ++i)
        rep.tail_sup = std::max(rep.tail_sup, rep.dj[static_cast<std::size_t>(i)]);
    return rep;
}

LogLogFit fit_log2(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] <= 0.0 || x[i] <= 0.0) continue;
        lx.push_back(std::log2(x[i]));
        ly.push_back(std::log2(y[i]));
    }
    const std::size_t n = lx.size();
    if (n < 2) throw std::runtime_error("fit_log2: fewer than 2 usable points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::runtime_error("fit_log2: degenerate abscissae");
    LogLogFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / static_cast<double>(n);
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.slope * lx[i] + fit.intercept;
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - mean) * (ly[i] - mean);
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double fit_log2_slope(std::span<const double> x, std::span<const double> y) {
    return fit_log2(x, y).slope;
}

TailDiagnostic cnat_tail_diagnostic(const BesovReport& report) {
    const int scales = static_cast<int>(report.dj.size());
    if (scales < 4) throw std::runtime_error("cnat_tail_diagnostic: fewer than 4 resolved scales");
    TailDiagnostic out;
    out.dj = report.dj;
    const int half = (scales + 1) / 2;
    std::vector<double> xs, ys;
    for (int i = scales - half; i < scales; ++i) {
        const int j = i - 1; // dj[0] holds j = -1
        xs.push_back(std::pow(2.0, j));
        ys.push_back(report.dj[static_cast<std::size_t>(i)]);
    }
    out.slope = fit_log2_slope(xs, ys);
    return out;
}

std::vector<std::pair<double, double>> besov_vmo_functional(const TorusField& f,
                                                            const BesovSpec& spec,
                                                            std::span<const double> eps_list) {
    if (spec.qkind != QKind::Vmo)
        throw std::invalid_argument("besov_vmo_functional: spec.q must be VMO");
    const auto& g = f.grid();
    const double h = g.spacing();
    const double alpha = spec.s;
    const double p = spec.p;
    const double q = spec.p; // single integrability index
    const std::size_t m = g.size();

    // ball stencil: Gauss radii x uniform angles (x Gauss polar in 3D)
    static const double rx[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                 0.9305681557970263};
    static const double rw[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                 0.1739274225687269};
    static const double mu[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
    static const double mw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
    const int n_angle = 8;

    std::vector<std::pair<double, double>> out;
    for (double eps : eps_list) {
        if (eps >= 1.5707963267948966) throw std::domain_error("besov_vmo_functional: eps >= pi/2");
        if (eps < h) throw std::domain_error("besov_vmo_functional: unresolved scale");

        std::vector<double> ball_avg(m, 0.0);
        double wsum = 0.0;
        auto add_offset = [&](const std::array<double, 3>& y, double w) {
            TorusField sh = shift(f, y);
            const std::ptrdiff_t mm = static_cast<std::ptrdiff_t>(m);
            std::vector<std::span<const double>> av, bv;
            for (int c = 0; c < f.ncomp(); ++c) {
                av.push_back(f.physical(c));
                bv.push_back(sh.physical(c));
            }
            const int nc = f.ncomp();
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < mm; ++i) {
                double s2 = 0.0;
                for (int c = 0; c < nc; ++c) {
                    double d = av[static_cast<std::size_t>(c)][i] - bv[static_cast<std::size_t>(c)][i];
                    s2 += d * d;
                }
                ball_avg[i] += w * std::pow(s2, 0.5 * q);
            }
            wsum += w;
        };

        if (g.dim() == 2) {
            for (int ir = 0; ir < 4; ++ir)
                for (int ia = 0; ia < n_angle; ++ia) {
                    double r = eps * rx[ir];
                    double th = kTwoPi * ia / n_angle;
                    add_offset({r * std::cos(th), r * std::sin(th), 0.0}, rw[ir] * rx[ir]);
                }
        } else {
            for (int ir = 0; ir < 4; ++ir)
                for (int im = 0; im < 4; ++im)
                    for (int ia = 0; ia < n_angle; ++ia) {
                        double r = eps * rx[ir];
                        double c = mu[im], s = std::sqrt(1 - c * c);
                        double th = kTwoPi * ia / n_angle;
                        add_offset({r * s * std::cos(th), r * s * std::sin(th), r * c},
                                   rw[ir] * rx[ir] * rx[ir] * mw[im]);
                    }
        }

        // normalize the ball average, integrate over x on the base grid
        double vol = g.cell_volume();
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += std::pow(ball_avg[i] / wsum, p / q);
        double V = std::pow(vol * sum, 1.0 / p) / std::pow(eps, alpha);
        out.emplace_back(eps, V);
    }
    return out;
}

std::vector<InterpolationRow> check_interpolation_chain(const TorusField& f, double p,
                                                        const DyadicPartition& part) {
    if (p < 1.0 || p > 3.0)
        throw std::domain_error("check_interpolation_chain: p must be in [1,3]");
    const double q = (p == 1.0) ? kInf : 2.0 * p / (p - 1.0);
    const double fl2 = lebesgue_norm(f, 2.0);
    std::vector<InterpolationRow> rows;
    for (int j = -1; j <= part.j_max(); ++j) {
        TorusField blk = part.block(f, j);
        Oversampled os = oversample(blk);
        InterpolationRow r;
        r.j = j;
        r.lhs = os.lp(3.0);
        const double l2 = os.lp(2.0);
        const double lq = os.lp(q);
        r.rhs = std::pow(l2, 1.0 - p / 3.0) * std::pow(lq, p / 3.0);
        r.ratio = (r.rhs > 0.0) ? r.lhs / r.rhs : 0.0;
        r.weighted_lhs = std::pow(2.0, j / 3.0) * r.lhs;
        r.weighted_rhs =
            std::pow(fl2, 1.0 - p / 3.0) * std::pow(std::pow(2.0, j / p) * lq, p / 3.0);
        rows.push_back(r);
    }
    return rows;
}

TwoSides check_embedding_sembed(const TorusField& f, double p, const DyadicPartition& part) {
    if (f.grid().dim() != 3)
        throw std::invalid_argument("check_embedding_sembed: dim 3 required");
    if (p <= 1.0 || p > 3.0)
        throw std::domain_error("check_embedding_sembed: p must be in (1,3]");
    if (!f.is_divergence_free())
        throw std::invalid_argument("check_embedding_sembed: divergence-free input required");
    BesovSpec spec{1.0 / p, 2.0 * p / (p - 1.0), QKind::Value, kInf};
    TwoSides out;
    out.lhs = besov_norm(f, spec, part).norm;
    auto grads = jacobian(f);
    out.rhs = lebesgue_norm(grads, 6.0 * p / (5.0 * p - 5.0));
    return out;
}

GagliardoNirenberg check_gagliardo_nirenberg(const TorusField& f, double p,
                                             bool helicity_variant) {
    const int d = f.grid().dim();
    GagliardoNirenberg out;
    if (!helicity_variant) {
        if (p <= 1.0 || p > 3.0)
            throw std::domain_error("check_gagliardo_nirenberg: p must be in (1,3]");
        out.target_exponent = 4.0 * d * p / (d * p + d - 2.0 * p + 2.0);
        out.grad_exponent = 2.0 * d * p / ((d + 2.0) * (p - 1.0));
        out.theta_l2 = (6.0 - 2.0 * p - p * d + 3.0 * d) / (2.0 * d + 4.0);
        out.theta_grad = (p * d + 2.0 * p - 2.0 - d) / (2.0 * d + 4.0);
    } else {
        if (p <= 2.0 || p > 3.0)
            throw std::domain_error("check_gagliardo_nirenberg: helicity variant needs 2 < p <= 3");
        if (d != 3)
            throw std::invalid_argument("check_gagliardo_nirenberg: helicity variant is 3D");
        out.target_exponent = 3.0 * p / (7.0 - 2.0 * p);
        out.grad_exponent = 6.0 * p / (5.0 * p - 7.0);
        out.theta_l2 = 3.0 - p;
        out.theta_grad = p - 2.0;
    }
    auto check_exp = [](double e, const char* name) {
        if (!(e >= 1.0) || std::isnan(e))
            throw std::domain_error(std::string("check_gagliardo_nirenberg: exponent ") + name +
                                    " outside [1,inf]");
    };
    check_exp(out.target_exponent, "target");
    check_exp(out.grad_exponent, "gradient");

    out.lhs = lebesgue_norm(f, out.target_exponent);
    const double l2 = lebesgue_norm(f, 2.0);
    auto grads = jacobian(f);
    const double gs = lebesgue_norm(grads, out.grad_exponent);
    out.rhs = std::pow(l2, out.theta_l2) * std::pow(gs, out.theta_grad);
    if (helicity_variant) out.rhs += l2;
    return out;
}

} // namespace torusflux
