#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>

#include "torusflux/fields.hpp"
#include "torusflux/norms.hpp"
#include "torusflux/partition.hpp"
#include "torusflux/spectral_ops.hpp"

using namespace torusflux;

namespace {

TorusField cosine_field(const TorusGrid& g, int kx, int axis = 0) {
    std::vector<double> phys(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        phys[i] = std::cos(kx * idx[static_cast<std::size_t>(axis)] * g.spacing());
    }
    return TorusField::from_physical(g, 1, std::move(phys));
}

} // namespace

TEST_CASE("grid invariants") {
    CHECK_THROWS(TorusGrid(2, 8));   // too coarse
    CHECK_THROWS(TorusGrid(2, 48));  // not a power of two
    CHECK_THROWS(TorusGrid(4, 64));  // bad dim
    TorusGrid g(2, 64);
    CHECK(g.spacing() == doctest::Approx(kTwoPi / 64));
    CHECK(g.wavenumber(0) == 0);
    CHECK(g.wavenumber(32) == -32);
    CHECK(g.wavenumber(63) == -1);
}

TEST_CASE("physical/spectral round trip and Parseval") {
    TorusGrid g(2, 64);
    TorusField f = random_scalar_field(g, 1.5, 123);
    const double maxf = f.max_abs_physical();

    // round trip through the transforms
    std::vector<double> phys(f.physical(0).begin(), f.physical(0).end());
    TorusField f2 = TorusField::from_physical(g, 1, std::move(phys));
    auto a = f.spectral(0);
    auto b = f2.spectral(0);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst <= 10 * 2.2e-16 * maxf);

    // quadrature of |f|^2 against the spectral sum
    double quad = 0.0;
    for (double v : f.physical(0)) quad += v * v;
    quad *= g.cell_volume();
    CHECK(quad == doctest::Approx(f.l2_norm() * f.l2_norm()).epsilon(1e-10));
}

TEST_CASE("stale cache reads are program errors") {
    TorusGrid g(2, 64);
    TorusField f = random_scalar_field(g, 2.0, 5);
    f.physical_mut(0)[0] += 1.0;
    CHECK_THROWS_AS((void)f.spectral(0), std::logic_error);
    f.sync();
    CHECK_NOTHROW((void)f.spectral(0));
}

TEST_CASE("partition profiles and support") {
    CHECK(rho_profile(0.0) == 1.0);
    CHECK(rho_profile(0.75) == 1.0);
    CHECK(rho_profile(4.0 / 3.0) == 0.0);
    CHECK(rho_profile(1.0) > 0.0);
    CHECK(rho_profile(1.0) < 1.0);
    // phi supported in [3/4, 8/3]
    CHECK(phi_profile(0.74) == 0.0);
    CHECK(phi_profile(8.0 / 3.0 + 1e-9) == 0.0);
    CHECK(phi_profile(1.4) > 0.0);

    TorusGrid g(2, 64);
    DyadicPartition part = make_partition(g);
    CHECK(part.j_max() == 3); // largest j with 2^j (8/3) <= 64/3

    // partition of unity at |xi| = 2
    const double s = part.partition_sum(2.0, 8);
    CHECK(std::abs(s - 1.0) <= 1e-12);
    // rho(0)=1 and all shells vanish at the origin
    CHECK(part.partition_sum(0.0, 8) == 1.0);
}

TEST_CASE("j_max tracks the dealias band") {
    CHECK(make_partition(TorusGrid(2, 16)).j_max() == 1);
    CHECK(make_partition(TorusGrid(2, 128)).j_max() == 4);
    CHECK(make_partition(TorusGrid(2, 256)).j_max() == 5);
    CHECK(make_partition(TorusGrid(3, 32)).j_max() == 2);
}

TEST_CASE("dyadic block of a single mode is the multiplier value") {
    TorusGrid g(2, 128);
    DyadicPartition part = make_partition(g);
    TorusField f = cosine_field(g, 4);
    // pick j with 3/4 <= 4/2^j <= 8/3  ->  j = 1 or 2
    for (int j : {1, 2}) {
        TorusField blk = part.block(f, j);
        const double mult = part.block_multiplier(j, 4.0);
        auto bp = blk.physical(0);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto idx = g.unflatten(i);
            const double expected = mult * std::cos(4.0 * idx[0] * g.spacing());
            worst = std::max(worst, std::abs(bp[i] - expected));
        }
        CHECK(worst <= 1e-12);
    }
    // constant field: only the j = -1 block survives
    TorusField c = TorusField::from_physical(g, 1, std::vector<double>(g.size(), 2.5));
    CHECK(part.block(c, -1).l2_norm() == doctest::Approx(c.l2_norm()));
    for (int j = 0; j <= part.j_max(); ++j) CHECK(part.block(c, j).l2_norm() <= 1e-14);
    CHECK_THROWS_AS(part.block(f, part.j_max() + 1), std::out_of_range);
}

TEST_CASE("block quasi-orthogonality: Delta_j Delta_j' = 0 for |j-j'| >= 2") {
    TorusGrid g(2, 128);
    DyadicPartition part = make_partition(g);
    TorusField f = random_scalar_field(g, 1.2, 99);
    const double scale = f.l2_norm();
    for (int j = -1; j <= part.j_max(); ++j)
        for (int jp = j + 2; jp <= part.j_max(); ++jp) {
            TorusField two = part.block(part.block(f, j), jp);
            CHECK(two.l2_norm() <= 1e-12 * scale);
        }
}

TEST_CASE("low-pass operator") {
    TorusGrid g(2, 128);
    DyadicPartition part = make_partition(g);

    // band-limited field passes through S_{j_max+1}
    TorusField f = random_scalar_field(g, 1.5, 7);
    std::vector<cplx> spec(f.spectral(0).begin(), f.spectral(0).end());
    const double keep = std::ldexp(0.75, part.j_max());
    for_each_mode(g, [&](std::size_t i, const std::array<double, 3>& k) {
        if (k[0] * k[0] + k[1] * k[1] >= keep * keep) spec[i] = cplx{0.0, 0.0};
    });
    TorusField fb = TorusField::from_spectral(g, 1, std::move(spec));
    TorusField s = part.low_pass(fb, part.j_max() + 1);
    CHECK(add_scaled(s, -1.0, fb).l2_norm() <= 1e-10 * fb.l2_norm());

    // a mode above the cutoff is annihilated: rho(2^-N 32) = 0 iff 32 >= (4/3) 2^N
    TorusField hi = cosine_field(g, 32);
    for (int N = 0; N <= 4; ++N) {
        if (std::ldexp(4.0 / 3.0, N) <= 32.0)
            CHECK(part.low_pass(hi, N).l2_norm() <= 1e-13 * hi.l2_norm());
    }

    // multiplier bounded by one
    TorusField r = random_scalar_field(g, 1.1, 17);
    for (int N = 0; N <= part.j_max() + 1; ++N)
        CHECK(part.low_pass(r, N).l2_norm() <= r.l2_norm() * (1 + 1e-10));

    // S_N^2 has the squared multiplier, dominated by S_N
    for (int N = 0; N <= part.j_max(); ++N) {
        TorusField s1 = part.low_pass(r, N);
        TorusField s2 = part.low_pass_squared(r, N);
        CHECK(s2.l2_norm() <= s1.l2_norm() * (1 + 1e-12));
        // squared multiplier = applying S_N twice
        TorusField twice = part.low_pass(s1, N);
        CHECK(add_scaled(twice, -1.0, s2).l2_norm() <= 1e-12 * std::max(s2.l2_norm(), 1e-30));
    }
}

TEST_CASE("gradient, curl, divergence on closed forms") {
    TorusGrid g(2, 64);
    // v = (sin y, 0): curl = -cos y
    std::vector<double> phys(2 * g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        phys[i] = std::sin(idx[1] * g.spacing());
    }
    TorusField v = TorusField::from_physical(g, 2, std::move(phys));
    TorusField w = curl(v);
    auto wp = w.physical(0);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        worst = std::max(worst, std::abs(wp[i] + std::cos(idx[1] * g.spacing())));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("ABC flow is a curl eigenfield for every A,B,C") {
    TorusGrid g(3, 32);
    for (auto [A, B, C] : {std::array<double, 3>{1, 1, 1}, std::array<double, 3>{1.3, 0.4, 2.0}}) {
        TorusField v = abc_flow(g, A, B, C);
        TorusField w = curl(v);
        CHECK(add_scaled(w, -1.0, v).l2_norm() <= 1e-10 * v.l2_norm());
        CHECK(v.divergence_ratio() <= 1e-12);
    }
}

TEST_CASE("Leray projection kills gradients and fixes divergence-free fields") {
    TorusGrid g(2, 64);
    TorusField psi = random_scalar_field(g, 2.0, 21);
    TorusField grad_psi = gradient(psi);
    CHECK(leray_project(grad_psi).l2_norm() <= 1e-12 * grad_psi.l2_norm());

    TorusField v = random_smooth_field(g, 2.0, 22);
    CHECK(add_scaled(leray_project(v), -1.0, v).l2_norm() <= 1e-10 * v.l2_norm());
}

TEST_CASE("dealiased product matches the exact product of two modes") {
    TorusGrid g(2, 64);
    TorusField a = cosine_field(g, 3);
    TorusField b = cosine_field(g, 5);
    TorusField prod = dealiased_product(a, b);
    // cos(3x) cos(5x) = (cos 2x + cos 8x)/2
    auto pp = prod.physical(0);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        const double x = idx[0] * g.spacing();
        worst = std::max(worst, std::abs(pp[i] - 0.5 * (std::cos(2 * x) + std::cos(8 * x))));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("spectral shift is exact for grid offsets") {
    TorusGrid g(2, 64);
    TorusField f = random_scalar_field(g, 1.5, 31);
    const double h = g.spacing();
    TorusField s = shift(f, {3 * h, 1 * h, 0.0});
    auto fp = f.physical(0);
    auto sp = s.physical(0);
    double worst = 0.0;
    const int n = g.n();
    for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1) {
            const int j0 = (i0 - 3 + n) % n, j1 = (i1 - 1 + n) % n;
            worst = std::max(worst, std::abs(sp[static_cast<std::size_t>(i0) * n + i1] -
                                             fp[static_cast<std::size_t>(j0) * n + j1]));
        }
    CHECK(worst <= 1e-11 * f.max_abs_physical());
}

TEST_CASE("operations are safe to invoke concurrently on shared inputs") {
    TorusGrid g(2, 64);
    DyadicPartition part = make_partition(g);
    TorusField f = random_scalar_field(g, 1.5, 99);
    const double expected = part.block(f, 2).l2_norm();

    std::vector<std::thread> workers;
    std::vector<double> results(8, 0.0);
    for (int t = 0; t < 8; ++t)
        workers.emplace_back([&, t] {
            TorusField blk = part.block(f, 2);
            TorusField grad = gradient(blk);
            results[static_cast<std::size_t>(t)] = blk.l2_norm() + 0.0 * grad.l2_norm();
        });
    for (auto& w : workers) w.join();
    for (double r : results) CHECK(r == expected);
}

TEST_CASE("oversampled quadrature reproduces closed-form L^p norms") {
    TorusGrid g(2, 64);
    TorusField f = cosine_field(g, 1);
    Oversampled os = oversample(f);
    // mean of cos^2 is 1/2
    CHECK(os.lp(2.0) == doctest::Approx(std::sqrt(0.5 * g.volume())).epsilon(1e-12));
    CHECK(os.lp(kInf) == doctest::Approx(1.0).epsilon(1e-12));
}
