#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torusflux/fields.hpp"
#include "torusflux/mollify.hpp"
#include "torusflux/norms.hpp"
#include "torusflux/spectral_ops.hpp"

using namespace torusflux;

namespace {

TorusField cosine_field(const TorusGrid& g, int kx) {
    std::vector<double> phys(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        phys[i] = std::cos(kx * idx[0] * g.spacing());
    }
    return TorusField::from_physical(g, 1, std::move(phys));
}

} // namespace

TEST_CASE("kernel construction invariants") {
    TorusGrid g(2, 128);
    const double h = g.spacing();
    Mollifier m(g, 8 * h);

    double mass = 0.0;
    for (double v : m.kernel()) {
        CHECK(v >= 0.0);
        mass += v;
    }
    mass *= g.cell_volume();
    CHECK(std::abs(mass - 1.0) <= 1e-12);
    CHECK(m.kernel_hat()[0] == doctest::Approx(1.0).epsilon(1e-13));

    // support inside |x| <= eps (periodic distance)
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (m.kernel()[i] == 0.0) continue;
        auto idx = g.unflatten(i);
        double r2 = 0.0;
        for (int a = 0; a < 2; ++a) {
            int d = idx[static_cast<std::size_t>(a)] <= g.n() / 2 ? idx[static_cast<std::size_t>(a)]
                                                                  : g.n() - idx[static_cast<std::size_t>(a)];
            r2 += (d * h) * (d * h);
        }
        CHECK(r2 <= (8 * h) * (8 * h) * (1 + 1e-12));
    }

    CHECK_THROWS_WITH_AS(Mollifier(g, 3.0 * h), doctest::Contains("under-resolved"),
                         std::domain_error);
    CHECK_THROWS_AS(Mollifier(g, 0.8), std::domain_error); // >= pi/4
}

TEST_CASE("mollification: exactness on constants, multiplier on modes") {
    TorusGrid g(2, 128);
    const double h = g.spacing();
    Mollifier m(g, 6 * h);

    TorusField c = TorusField::from_physical(g, 1, std::vector<double>(g.size(), 4.2));
    TorusField ce = mollify(c, m);
    auto cp = ce.physical(0);
    for (std::size_t i = 0; i < g.size(); i += 701) CHECK(cp[i] == doctest::Approx(4.2).epsilon(1e-13));

    // single mode against the direct convolution quadrature oracle
    const int k = 5;
    TorusField f = cosine_field(g, k);
    TorusField fe = mollify(f, m);
    // oracle at a handful of nodes: sum_y ker(y) cell cos(k(x-y))
    auto fep = fe.physical(0);
    for (std::size_t probe : {std::size_t(0), std::size_t(4097), std::size_t(9000)}) {
        auto pidx = g.unflatten(probe);
        const double x = pidx[0] * h;
        double direct = 0.0;
        for (const auto& off : m.support())
            direct += off.weight * std::cos(k * (x - off.shift[0] * h));
        CHECK(fep[probe] == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
    }
    // and the multiplier lands in (0, 1] for a resolved mode
    const double eta_k = m.kernel_hat()[static_cast<std::size_t>(k) * g.n()];
    CHECK(eta_k > 0.0);
    CHECK(eta_k <= 1.0);
    CHECK(fe.l2_norm() == doctest::Approx(eta_k * f.l2_norm()).epsilon(1e-12));
}

TEST_CASE("smooth fields mollify at second order") {
    TorusGrid g(2, 256);
    TorusField f = random_smooth_field(g, 8.0, 17);
    std::vector<double> ladder = default_eps_ladder(g); // 16h .. 4h
    std::vector<double> diffs;
    for (double eps : ladder) {
        Mollifier m(g, eps);
        diffs.push_back(add_scaled(mollify(f, m), -1.0, f).l2_norm());
    }
    const double slope = fit_log2_slope(ladder, diffs);
    CHECK(std::abs(slope - 2.0) <= 0.2);
}

TEST_CASE("mollification contracts every sampled L^p norm") {
    TorusGrid g(2, 128);
    TorusField f = random_scalar_field(g, 1.3, 23);
    for (double eps_mult : {5.0, 11.0}) {
        Mollifier m(g, eps_mult * g.spacing());
        TorusField fe = mollify(f, m);
        for (double p : {1.0, 2.0, 3.0, kInf})
            CHECK(lebesgue_norm(fe, p) <= lebesgue_norm(f, p) * (1 + 1e-9));
    }
}

TEST_CASE("commutator: vanishing, bilinearity, symmetry, closed form") {
    TorusGrid g(2, 64);
    const double h = g.spacing();
    Mollifier m(g, 6 * h);

    TorusField c = TorusField::from_physical(g, 1, std::vector<double>(g.size(), 2.0));
    TorusField f = random_scalar_field(g, 1.5, 3);
    CHECK(ceti_commutator(c, f, m).max_abs_physical() <= 1e-12);
    CHECK(ceti_commutator(f, c, m).max_abs_physical() <= 1e-12);

    TorusField gfield = random_scalar_field(g, 1.5, 4);
    TorusField ab = ceti_commutator(scaled(f, 2.0), scaled(gfield, -3.0), m);
    TorusField base = ceti_commutator(f, gfield, m);
    CHECK(add_scaled(ab, 6.0, base).max_abs_physical() <=
          1e-12 * std::max(1.0, ab.max_abs_physical()));

    TorusField sym = ceti_commutator(gfield, f, m);
    CHECK(add_scaled(sym, -1.0, base).max_abs_physical() <=
          1e-12 * std::max(1.0, base.max_abs_physical()));

    // f = g = cos(kx): commutator = 1/2 + eta(2k) cos(2kx)/2 - eta(k)^2 cos^2(kx)
    const int k = 3;
    TorusField mode = cosine_field(g, k);
    TorusField comm = ceti_commutator(mode, mode, m);
    const double eta_k = m.kernel_hat()[static_cast<std::size_t>(k) * g.n()];
    const double eta_2k = m.kernel_hat()[static_cast<std::size_t>(2 * k) * g.n()];
    auto cp2 = comm.physical(0);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        const double x = idx[0] * h;
        const double expected =
            0.5 + 0.5 * eta_2k * std::cos(2 * k * x) - eta_k * eta_k * std::cos(k * x) * std::cos(k * x);
        worst = std::max(worst, std::abs(cp2[i] - expected));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("commutator decomposition agrees on random pairs") {
    TorusGrid g(2, 64);
    Mollifier m(g, 5 * g.spacing());
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        TorusField f = random_scalar_field(g, 1.4, 100 + t);
        TorusField gg = random_scalar_field(g, 1.4, 200 + t);
        double err = 0.0;
        ceti_commutator(f, gg, m, &err);
        worst = std::max(worst, err);
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("mollification rate scan on planted and smooth fields") {
    TorusGrid g(2, 512);
    std::vector<double> ladder;
    const double top = 0.98 * kTwoPi / 8.0;
    for (int m = 6; m >= 0; --m) ladder.push_back(top / std::pow(2.0, 0.5 * m));

    // planted alpha = 1/2: ||f^eps - f|| ~ eps^(1/2)
    TorusField planted = power_law_field(g, 1.5, 12, 0.48 * g.n());
    BesovSpec spec{0.5, 2.0, QKind::CNat, kInf};
    MollificationRates r0 = lemma22_rates(planted, spec, ladder, 0);
    CHECK(std::abs(r0.diff_slope - 0.5) <= 0.1);

    // smooth field, first derivative: no blow-up as eps -> 0
    TorusField smooth = random_smooth_field(g, 8.0, 13);
    BesovSpec spec2{0.5, 2.0, QKind::Value, kInf};
    MollificationRates r1 = lemma22_rates(smooth, spec2, ladder, 1);
    CHECK(std::abs(r1.grad_slope) <= 0.2);

    // planted alpha = 1/3, first derivative: ||grad f^eps|| = O(eps^(alpha-1))
    TorusField planted2 = power_law_field(g, 4.0 / 3.0, 14, 0.48 * g.n());
    BesovSpec spec3{1.0 / 3.0, 2.0, QKind::CNat, kInf};
    MollificationRates r2 = lemma22_rates(planted2, spec3, ladder, 1);
    CHECK(r2.grad_slope >= -2.0 / 3.0 - 0.1);
    CHECK(r2.grad_slope <= 0.0);

    CHECK_THROWS(lemma22_rates(smooth, spec2, std::vector<double>{0.1, 0.2}, 0)); // < 5 points
    CHECK_THROWS(lemma22_rates(smooth, spec2, ladder, 3));
}

TEST_CASE("single-mode commutator norm scales like eps^2") {
    TorusGrid g(2, 256);
    TorusField mode = single_mode(g, {3, 1, 0}, 1.0, 0.2);
    std::vector<double> ladder = default_eps_ladder(g);
    std::vector<double> vals;
    for (double eps : ladder)
        vals.push_back(lemma23_commutator_norm(mode, Mollifier(g, eps), 1.0, 2.0, 4.0));
    CHECK(std::abs(fit_log2_slope(ladder, vals) - 2.0) <= 0.3);

    TorusField zero(g, 2);
    Mollifier m0(g, ladder[0]);
    CHECK(lemma23_commutator_norm(zero, m0, 1.0, 2.0, 4.0) <= 1e-14);

    CHECK_THROWS_AS(lemma23_commutator_norm(mode, m0, 2.5, 2.0, 4.0), std::domain_error);
    CHECK_THROWS_AS(lemma23_commutator_norm(mode, m0, 1.0, 0.5, 4.0), std::domain_error);
    CHECK_THROWS_AS(lemma23_commutator_norm(mode, m0, 1.0, 2.0, 1.5), std::domain_error);
}

TEST_CASE("product commutators vanish as eps -> 0") {
    TorusGrid g(2, 256);
    TorusField f = random_scalar_field(g, 6.0, 51);
    TorusField gg = random_scalar_field(g, 6.0, 52);
    std::vector<double> ladder = default_eps_ladder(g);

    auto seq = lemma24_vanishing(f, gg, ladder, CommutatorMode::Product, 4.0, 4.0);
    std::vector<double> xs, ys;
    for (auto [e, v] : seq) {
        xs.push_back(e);
        ys.push_back(v);
    }
    // smooth inputs: quadratic decay, checked on the endpoints of the ladder
    const double ratio = ys.front() / ys.back(); // largest eps over smallest
    const double expected = std::pow(xs.front() / xs.back(), 2.0);
    CHECK(ratio / expected >= 0.3);
    CHECK(ratio / expected <= 3.0);
    CHECK(std::abs(fit_log2_slope(xs, ys) - 2.0) <= 0.4);

    // f = g reduces to the tensor-commutator path (scalar case, L^{4/3})
    Mollifier m(g, ladder[0]);
    auto one = lemma24_vanishing(f, f, std::vector<double>{ladder[0]}, CommutatorMode::Product,
                                 8.0 / 3.0, 8.0 / 3.0);
    const double via23 = lemma23_commutator_norm(f, m, 1.0, 2.0, 4.0); // s = q/(q-1) = 4/3
    CHECK(one.front().second == doctest::Approx(via23).epsilon(1e-12));
}

TEST_CASE("cross-product commutator of a field with itself is zero") {
    TorusGrid g(3, 64);
    TorusField v = random_smooth_field(g, 2.5, 61);
    std::vector<double> ladder = {4 * g.spacing(), 6 * g.spacing()};
    for (auto [e, val] : lemma24_vanishing(v, v, ladder, CommutatorMode::Cross, 4.0, 4.0)) {
        (void)e;
        CHECK(val <= 1e-12);
    }
}
