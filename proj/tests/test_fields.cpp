#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torusflux/fields.hpp"
#include "torusflux/norms.hpp"
#include "torusflux/spectral_ops.hpp"
#include "torusflux/tfld.hpp"

using namespace torusflux;

namespace {

// convective term sum_j v_j d_j v_i with alias-free products
TorusField convective_term(const TorusField& v) {
    const int d = v.grid().dim();
    std::vector<TorusField> comps;
    for (int i = 0; i < d; ++i) {
        std::vector<cplx> sum(v.grid().size(), cplx{0.0, 0.0});
        for (int j = 0; j < d; ++j) {
            TorusField term = dealiased_product(component(v, j),
                                                partial_derivative(component(v, i), j));
            auto s = term.spectral(0);
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += s[k];
        }
        comps.push_back(TorusField::from_spectral(v.grid(), 1, std::move(sum)));
    }
    return assemble(comps);
}

} // namespace

TEST_CASE("Taylor-Green is a steady Euler solution with the known pressure") {
    TorusGrid g(2, 64);
    TorusField v = taylor_green_2d(g);
    CHECK(v.divergence_ratio() <= 1e-12);

    TorusField conv = convective_term(v);
    // v.grad v is a pure gradient: the projection annihilates it
    CHECK(leray_project(conv).l2_norm() <= 1e-10);

    // v.grad v + grad Pi = 0 with Pi = (cos 2x + cos 2y)/4
    std::vector<double> pi(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        pi[i] = 0.25 * (std::cos(2 * idx[0] * g.spacing()) + std::cos(2 * idx[1] * g.spacing()));
    }
    TorusField grad_pi = gradient(TorusField::from_physical(g, 1, std::move(pi)));
    CHECK(add_scaled(conv, 1.0, grad_pi).l2_norm() <= 1e-10);
}

TEST_CASE("ABC flow invariants") {
    TorusGrid g(3, 32);
    TorusField v = abc_flow(g, 1.0, 1.0, 1.0);
    CHECK(v.divergence_ratio() <= 1e-12);
    // helicity = int |v|^2 = 3 (2pi)^3 at A=B=C=1
    const double vol = g.volume();
    CHECK(integral_pairing(v, curl(v)) == doctest::Approx(3.0 * vol).epsilon(1e-12));
    CHECK(v.l2_norm() * v.l2_norm() == doctest::Approx(3.0 * vol).epsilon(1e-12));

    TorusField single = abc_flow(g, 1.0, 0.0, 0.0);
    CHECK(single.l2_norm() * single.l2_norm() == doctest::Approx(vol).epsilon(1e-12));
}

TEST_CASE("single divergence-free mode") {
    TorusGrid g(3, 32);
    TorusField v = single_mode(g, {2, 1, 0}, 1.5, 0.3);
    CHECK(v.divergence_ratio() <= 1e-12);
    CHECK(v.max_abs_physical() <= 1.5 * (1 + 1e-12));
    CHECK_THROWS(single_mode(g, {0, 0, 0}, 1.0, 0.0));
}

TEST_CASE("lacunary generator plants the d_j sequence") {
    TorusGrid g(2, 256);
    DyadicPartition part = make_partition(g);

    std::vector<double> ones(static_cast<std::size_t>(part.j_max()), 1.0);
    GeneratedField gen = lacunary_field(g, ones, 1.0 / 3.0, 3.0, 99, part);
    CHECK(gen.field.divergence_ratio() <= 1e-10);
    BesovSpec spec{1.0 / 3.0, 3.0, QKind::CNat, kInf};
    BesovReport rep = besov_norm(gen.field, spec, part);
    for (int j = 1; j <= part.j_max(); ++j)
        CHECK(std::abs(rep.dj[static_cast<std::size_t>(j + 1)] - 1.0) <= 0.05);
    CHECK(std::abs(cnat_tail_diagnostic(rep).slope) <= 0.05);

    std::vector<double> decaying;
    for (int j = 1; j <= part.j_max(); ++j) decaying.push_back(std::pow(2.0, -0.25 * j));
    GeneratedField gen2 = lacunary_field(g, decaying, 1.0 / 3.0, 3.0, 99, part);
    BesovReport rep2 = besov_norm(gen2.field, spec, part);
    CHECK(std::abs(cnat_tail_diagnostic(rep2).slope + 0.25) <= 0.05);

    // single nonzero entry: one shell, distant blocks vanish
    std::vector<double> solo(static_cast<std::size_t>(part.j_max()), 0.0);
    solo[2] = 1.0; // j = 3
    GeneratedField gen3 = lacunary_field(g, solo, 1.0 / 3.0, 3.0, 7, part);
    const double scale = gen3.field.l2_norm();
    for (int jp = -1; jp <= part.j_max(); ++jp) {
        if (std::abs(jp - 3) < 2) continue;
        CHECK(part.block(gen3.field, jp).l2_norm() <= 1e-12 * scale);
    }
}

TEST_CASE("certificate honesty: re-measuring reproduces the build values") {
    TorusGrid g(2, 128);
    DyadicPartition part = make_partition(g);
    std::vector<double> dj = {1.0, 0.7, 0.4, 0.25};
    GeneratedField gen = lacunary_field(g, dj, 0.5, 2.0, 4242, part);
    for (int j = 1; j <= 4; ++j) {
        const double measured =
            std::pow(2.0, 0.5 * j) * lebesgue_norm(part.block(gen.field, j), 2.0);
        CHECK(measured ==
              doctest::Approx(gen.certificate.measured_dj[static_cast<std::size_t>(j - 1)])
                  .epsilon(1e-12));
        CHECK(std::abs(measured - dj[static_cast<std::size_t>(j - 1)]) <=
              0.05 * dj[static_cast<std::size_t>(j - 1)]);
    }
    CHECK(gen.certificate.kind == "lacunary");
    CHECK(gen.certificate.seed == 4242);
}

TEST_CASE("lacunary rejects sequences beyond the resolved scales") {
    TorusGrid g(2, 256);
    DyadicPartition part = make_partition(g);
    std::vector<double> too_long(static_cast<std::size_t>(part.j_max() + 1), 1.0);
    CHECK_THROWS(lacunary_field(g, too_long, 1.0 / 3.0, 3.0, 1, part));
}

TEST_CASE("random smooth field: spectrum envelope and determinism") {
    TorusGrid g(2, 128);
    DyadicPartition part = make_partition(g);

    TorusField f = random_smooth_field(g, 10.0, 31415);
    CHECK(f.divergence_ratio() <= 1e-10);
    BesovReport rep = besov_norm(f, BesovSpec{1.0 / 3.0, 3.0, QKind::CNat, kInf}, part);
    CHECK(cnat_tail_diagnostic(rep).slope <= -2.0);

    TorusField f2 = random_smooth_field(g, 10.0, 31415);
    CHECK(tfld_serialize(f) == tfld_serialize(f2));

    TorusField rough = random_smooth_field(g, 1.1, 2);
    CHECK(std::isfinite(rough.l2_norm()));
    CHECK(rough.divergence_ratio() <= 1e-10);
    CHECK_THROWS(random_smooth_field(g, 0.9, 2));

    // every generator output is a Leray fixed point
    for (const TorusField& v : {f, rough}) {
        CHECK(add_scaled(leray_project(v), -1.0, v).l2_norm() <= 1e-10 * v.l2_norm());
    }
}

TEST_CASE("generated fields stay in the dealias band") {
    TorusGrid g(2, 64);
    TorusField f = random_smooth_field(g, 2.0, 8);
    CHECK(band_limited_below(f, g.dealias_radius() * 1.0001));
}
