#include "msentropy/entropy.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace msentropy;

namespace {

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = dist(gen);
    return x;
}

// AR(3) with the reference coefficients, for data with some structure.
std::vector<double> structured(std::size_t n, std::uint64_t seed) {
    auto e = gaussian(n + 200, seed);
    std::vector<double> x(n + 200, 0.0);
    for (std::size_t t = 3; t < x.size(); ++t) x[t] = 0.5 * x[t - 1] + 0.25 * x[t - 2] + 0.125 * x[t - 3] + e[t];
    return {x.begin() + 200, x.end()};
}

void check_same(const std::optional<double>& a, const std::optional<double>& b, double tol) {
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(std::abs(*a - *b) <= tol);
}

}  // namespace

TEST_CASE("coarse_grain") {
    CHECK(coarse_grain(std::vector<double>{1, 3, 5, 7}, 2) == Samples{2, 6});
    CHECK(coarse_grain(std::vector<double>{4, 4, 4, 4, 4}, 1) == Samples{4, 4, 4, 4, 4});
    CHECK(coarse_grain(std::vector<double>{1, 2, 3, 4, 5}, 2) == Samples{1.5, 3.5});
    CHECK_THROWS_AS(coarse_grain(std::vector<double>{1, 2}, 0), InvalidParameter);
    CHECK_THROWS_AS(coarse_grain(std::vector<double>{1, 2}, 3), InvalidParameter);

    const auto x = gaussian(103, 5);
    for (int tau : {1, 2, 7, 50}) {
        const auto got = coarse_grain(x, tau);
        const auto want = oracle::coarse(x, tau);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
    }
}

TEST_CASE("resolve_tolerance") {
    SUBCASE("unit variance single channel") {
        auto x = zscore(gaussian(50, 1));
        CHECK(resolve_tolerance(MultichannelSeries({x}), ToleranceRule::trace(0.15)) ==
              doctest::Approx(0.15).epsilon(1e-12));
    }
    SUBCASE("two unit-variance channels") {
        MultichannelSeries d({zscore(gaussian(50, 1)), zscore(gaussian(50, 2))});
        CHECK(resolve_tolerance(d, ToleranceRule::trace(0.2)) == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("hand-computed variances") {
        // var([1,2,3,4]) = 5/3, var([2,4,6,8]) = 20/3
        MultichannelSeries d({{1, 2, 3, 4}, {2, 4, 6, 8}});
        CHECK(resolve_tolerance(d, ToleranceRule::trace(0.5)) == doctest::Approx(25.0 / 6.0).epsilon(1e-14));
    }
    SUBCASE("absolute passes through") {
        MultichannelSeries d({{1, 1, 1}});
        CHECK(resolve_tolerance(d, ToleranceRule::absolute(0.3)) == 0.3);
    }
    SUBCASE("constant data") {
        MultichannelSeries d({{2, 2, 2, 2}, {1, 1, 1, 1}});
        CHECK_THROWS_AS(resolve_tolerance(d, ToleranceRule::trace(0.2)), DegenerateTolerance);
    }
    SUBCASE("single sample") {
        MultichannelSeries d(std::vector<Samples>{{2.0}});
        CHECK_THROWS_AS(resolve_tolerance(d, ToleranceRule::trace(0.2)), InvalidParameter);
    }
}

TEST_CASE("build_templates") {
    const std::vector<double> y4{1, 2, 3, 4};
    auto t = build_templates(y4, 2, 1);
    REQUIRE(t);
    REQUIRE(t->count == 3);
    CHECK(t->template_at(0) == std::vector<double>{1, 2});
    CHECK(t->template_at(1) == std::vector<double>{2, 3});
    CHECK(t->template_at(2) == std::vector<double>{3, 4});

    const std::vector<double> y5{1, 2, 3, 4, 5};
    t = build_templates(y5, 2, 2);
    REQUIRE(t);
    REQUIRE(t->count == 3);
    CHECK(t->template_at(0) == std::vector<double>{1, 3});
    CHECK(t->template_at(1) == std::vector<double>{2, 4});
    CHECK(t->template_at(2) == std::vector<double>{3, 5});

    const std::vector<double> y10(10, 0.0);
    t = build_templates(y10, 3, 1);
    REQUIRE(t);
    CHECK(t->count == 8);
    CHECK(t->dimension() == 3);

    CHECK_FALSE(build_templates(std::vector<double>{1, 2, 3}, 3, 1).has_value());
    CHECK_FALSE(build_templates(std::vector<double>{1, 2, 3, 4}, 2, 3).has_value());
}

TEST_CASE("chebyshev_distance") {
    CHECK(chebyshev_distance(std::vector<double>{1, 2}, std::vector<double>{1.1, 2.4}) ==
          doctest::Approx(0.4).epsilon(1e-14));
    CHECK(chebyshev_distance(std::vector<double>{3, 4}, std::vector<double>{3, 4}) == 0.0);
    CHECK(chebyshev_distance(std::vector<double>{0, 0, 0}, std::vector<double>{1, -2, 0.5}) == 2.0);
    CHECK_THROWS_AS(chebyshev_distance(std::vector<double>{1}, std::vector<double>{1, 2}), InvalidParameter);
}

TEST_CASE("match_stats") {
    SUBCASE("constant signal") {
        const std::vector<double> y(20, 3.0);
        const auto s = match_stats(*build_templates(y, 2, 1), 0.01);
        for (double r : s.local) CHECK(r == 1.0);
        CHECK(s.global == 1.0);
    }
    SUBCASE("no pair within radius") {
        const std::vector<double> y{0, 10, 20};
        const auto s = match_stats(*build_templates(y, 1, 1), 1.0);
        for (auto b : s.counts) CHECK(b == 0);
        CHECK(s.global == 0.0);
    }
    SUBCASE("boundary is inclusive") {
        const std::vector<double> y{0, 0.5, 5};
        const auto s = match_stats(*build_templates(y, 1, 1), 0.5);
        CHECK(s.counts == std::vector<std::uint32_t>{1, 1, 0});
    }
    SUBCASE("brute-force oracle") {
        // T spans several kernel blocks.
        for (std::size_t n : {200u, 700u}) {
            const auto y = gaussian(n, n);
            for (int lag : {1, 3}) {
                const auto t = *build_templates(y, 2, lag);
                const auto s = match_stats(t, 0.2);
                const auto want = oracle::counts(y, 2, lag, t.count, 0.2);
                REQUIRE(s.counts.size() == want.size());
                bool same = true;
                for (std::size_t i = 0; i < want.size(); ++i) {
                    same &= s.counts[i] == static_cast<std::uint32_t>(want[i]);
                    CHECK(s.local[i] == static_cast<double>(s.counts[i]) / static_cast<double>(t.count - 1));
                    CHECK(s.counts[i] <= t.count - 1);
                }
                CHECK(same);
                CHECK(std::abs(s.global - oracle::phi(y, 2, lag, t.count, 0.2)) < 1e-12);
            }
        }
    }
    SUBCASE("symmetric counting") {
        const auto y = gaussian(150, 9);
        const auto t = *build_templates(y, 3, 1);
        const auto s = match_stats(t, 0.5);
        std::uint64_t total = 0;
        for (auto b : s.counts) total += b;
        CHECK(total % 2 == 0);
    }
}

TEST_CASE("count monotonicity in radius") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto y = gaussian(250, 100 + seed);
        const auto t = *build_templates(y, 2, 1);
        auto prev = count_matches(t, 0.01);
        for (double r = 0.05; r < 2.0; r += 0.05) {
            const auto cur = count_matches(t, r);
            for (std::size_t i = 0; i < cur.size(); ++i) CHECK(cur[i] >= prev[i]);
            prev = cur;
        }
    }
}

TEST_CASE("sampen") {
    SUBCASE("constant sequence") {
        const std::vector<double> x(60, 1.5);
        for (int m : {1, 2, 4}) {
            const auto e = sampen(x, m, 0.1);
            REQUIRE(e.value);
            CHECK(*e.value == 0.0);
        }
    }
    SUBCASE("alternating sequence") {
        std::vector<double> x(1000);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 ? -1.0 : 1.0;
        const auto e = sampen(x, 2, 0.1, 1, true);
        REQUIRE(e.value);
        CHECK(*e.value == 0.0);
        const auto o = oracle::sampen(x, 2, 0.1, 1, true);
        CHECK(*o.value == 0.0);
        // Unequal template counts leave only a finite-size offset.
        const auto d = sampen(x, 2, 0.1);
        REQUIRE(d.value);
        CHECK(std::abs(*d.value) < 1e-5);
    }
    SUBCASE("undefined without matches") {
        const std::vector<double> x{0, 10, 20, 30, 40};
        const auto e = sampen(x, 2, 1.0);
        CHECK_FALSE(e.value);
        CHECK(e.phi_m == 0.0);
    }
    SUBCASE("negative value surfaced") {
        const std::vector<double> x{0.2, 0.07, 0.57, 0.64, 0.86};
        const auto e = sampen(x, 1, 0.6, 2);
        REQUIRE(e.value);
        CHECK(e.phi_m == doctest::Approx(0.8));
        CHECK(e.phi_m1 == 1.0);
        CHECK(*e.value == doctest::Approx(-std::log(1.25)));

        const auto curve = mse(x, EntropyParams{1, 2, {1}, ToleranceRule::absolute(0.6)});
        CHECK(curve.has_negative());
    }
    SUBCASE("iid gaussian approaches -ln erf(r/2)") {
        const auto x = gaussian(20000, 77);
        const auto e = sampen(x, 2, 0.2);
        REQUIRE(e.value);
        CHECK(std::abs(*e.value + std::log(std::erf(0.1))) < 0.1);
    }
}

TEST_CASE("oracle equivalence for random inputs") {
    std::mt19937_64 gen(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 60 + gen() % 241;
        const int m = 1 + static_cast<int>(gen() % 3);
        const int lag = 1 + static_cast<int>(gen() % 2);
        const std::size_t p = 1 + gen() % 3;
        const bool equal = gen() % 2;
        std::vector<Samples> chans;
        for (std::size_t c = 0; c < p; ++c) {
            chans.push_back(c == 1 ? structured(n, gen()) : gaussian(n, gen()));
        }
        const MultichannelSeries data(chans);
        CAPTURE(trial);
        CAPTURE(n);
        CAPTURE(m);
        CAPTURE(lag);
        CAPTURE(p);

        const auto ref = sampen(chans[0], m, 0.3, lag, equal);
        const auto ora = oracle::sampen(chans[0], m, 0.3, lag, equal);
        check_same(ref.value, ora.value, 1e-12);
        CHECK(std::abs(ref.phi_m - ora.phi_m) < 1e-12);

        EntropyParams params;
        params.m = m;
        params.lag = lag;
        params.scales = {1, 2, 3};
        params.tolerance = ToleranceRule::trace(0.15);
        params.equal_template_count = equal;
        const auto curve = vemse(data, params);
        const double radius = 0.15 * oracle::trace(chans);
        CHECK(std::abs(curve.radius - radius) < 1e-12);
        for (const auto& pt : curve.points) {
            const auto o = oracle::vemse_at(chans, m, lag, pt.scale, radius, equal);
            check_same(pt.value, o.value, 1e-12);
            CHECK(std::abs(pt.phi_m - o.phi_m) < 1e-12);
            CHECK(std::abs(pt.phi_m1 - o.phi_m1) < 1e-12);
        }

        std::vector<int> dims(p), lags(p);
        for (std::size_t c = 0; c < p; ++c) {
            dims[c] = 1 + static_cast<int>(gen() % 3);
            lags[c] = 1 + static_cast<int>(gen() % 2);
        }
        MmseParams mp;
        mp.dims = dims;
        mp.lags = lags;
        mp.scales = {1, 2};
        mp.tolerance = ToleranceRule::trace(0.15);
        const auto mc = mmse(data, mp);
        for (const auto& pt : mc.points) {
            const auto o = oracle::mmse_at(chans, dims, lags, pt.scale, 0.15);
            check_same(pt.value, o.value, 1e-12);
            CHECK(std::abs(pt.phi_m - o.phi_m) < 1e-12);
            CHECK(std::abs(pt.phi_m1 - o.phi_m1) < 1e-12);
        }
    }
}

TEST_CASE("single-channel reduction") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto x = structured(400, seed);
        for (bool equal : {false, true}) {
            EntropyParams params;
            params.m = 2;
            params.scales = scale_range(1, 6);
            params.tolerance = ToleranceRule::trace(0.2);
            params.equal_template_count = equal;
            const auto v = vemse(MultichannelSeries({x}), params);
            const auto u = mse(x, params);
            CHECK(v == u);
            for (const auto& pt : u.points) {
                const auto s = sampen(coarse_grain(x, pt.scale), 2, u.radius, 1, equal);
                CHECK(pt.value == s.value);
            }
        }
    }
}

TEST_CASE("mmse with one channel is sampen on z-scored data") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto x = structured(300, seed);
        const auto mc = mmse(MultichannelSeries({x}), MmseParams::uniform(1, 2, 1, {1, 2, 3}, ToleranceRule::trace(0.15)));
        const auto z = zscore(x);
        for (const auto& pt : mc.points) {
            const auto s = sampen(coarse_grain(z, pt.scale), 2, mc.radius, 1, true);
            check_same(pt.value, s.value, 1e-12);
        }
    }
}

TEST_CASE("constant channels") {
    const MultichannelSeries flat({Samples(80, 1.0), Samples(80, -2.0)});
    EntropyParams params;
    params.scales = {1, 2, 4};
    params.tolerance = ToleranceRule::absolute(0.1);
    for (const auto& pt : vemse(flat, params).points) CHECK(pt.value == 0.0);
    for (const auto& pt : mmse(flat, MmseParams::uniform(2, 2, 1, {1, 2, 4}, ToleranceRule::absolute(0.1))).points) {
        CHECK(pt.value == 0.0);
    }
    params.tolerance = ToleranceRule::trace(0.15);
    CHECK_THROWS_AS(vemse(flat, params), DegenerateTolerance);
}

TEST_CASE("translation invariance") {
    const MultichannelSeries data({gaussian(300, 1), structured(300, 2)});
    const MultichannelSeries shifted({[&] {
                                          auto x = data.channels()[0];
                                          for (auto& v : x) v += 3.0;
                                          return x;
                                      }(),
                                      [&] {
                                          auto x = data.channels()[1];
                                          for (auto& v : x) v += 3.0;
                                          return x;
                                      }()});
    EntropyParams params;
    params.scales = {1, 2, 3};
    const auto a = vemse(data, params);
    const auto b = vemse(shifted, params);
    const auto ma = mmse(data, MmseParams::uniform(2, 2, 1, {1, 2, 3}, ToleranceRule::trace(0.15)));
    const auto mb = mmse(shifted, MmseParams::uniform(2, 2, 1, {1, 2, 3}, ToleranceRule::trace(0.15)));
    for (std::size_t i = 0; i < a.size(); ++i) {
        check_same(a.points[i].value, b.points[i].value, 1e-12);
        check_same(ma.points[i].value, mb.points[i].value, 1e-12);
    }
}

TEST_CASE("duplicate channels can be swapped") {
    const MultichannelSeries base({gaussian(300, 3), structured(300, 4)});
    EntropyParams params;
    params.scales = {1, 2};

    const std::vector<std::size_t> triple{0, 1, 0};
    const std::vector<std::size_t> swap_ends{2, 1, 0};
    const auto t = base.select(triple);
    CHECK(vemse(t, params) == vemse(t.select(swap_ends), params));

    const std::vector<std::size_t> pair{1, 1};
    const std::vector<std::size_t> rev{1, 0};
    const auto dup = base.select(pair);
    CHECK(vemse(dup, params) == vemse(dup.select(rev), params));
}

TEST_CASE("channel order matters for distinct signals") {
    const MultichannelSeries data({gaussian(500, 5), structured(500, 6)});
    const std::vector<std::size_t> rev{1, 0};
    EntropyParams params;
    const auto a = vemse(data, params);
    const auto b = vemse(data.select(rev), params);
    CHECK(a.points[0].value != b.points[0].value);
}

TEST_CASE("feasibility and undefined points") {
    EntropyParams params;
    params.m = 2;
    params.scales = {1, 5, 12};
    params.tolerance = ToleranceRule::absolute(0.5);
    // P=2, m=2: the widest m+1 template spans 4 samples and needs N_t >= 5.
    const MultichannelSeries data({gaussian(50, 1), gaussian(50, 2)});
    const auto c = vemse(data, params);
    CHECK(c.at_scale(1).defined());
    CHECK(c.at_scale(5).defined());
    CHECK_FALSE(c.at_scale(12).defined());
    const auto o = oracle::vemse_at(data.channels(), 2, 1, 12, 0.5);
    CHECK_FALSE(o.value);

    params.scales = {51};
    CHECK_FALSE(vemse(data, params).points[0].defined());
}

TEST_CASE("per-scale tolerance") {
    const MultichannelSeries data({gaussian(400, 1), structured(400, 2)});
    EntropyParams params;
    params.scales = {1, 3};
    params.per_scale_tolerance = true;
    const auto c = vemse(data, params);
    const double r3 = 0.15 * oracle::trace({oracle::coarse(data.channels()[0], 3), oracle::coarse(data.channels()[1], 3)});
    const auto o = oracle::vemse_at(data.channels(), 2, 1, 3, r3);
    check_same(c.at_scale(3).value, o.value, 1e-12);
}

TEST_CASE("parameter validation") {
    const MultichannelSeries data({gaussian(100, 1)});
    EntropyParams p;
    p.m = 0;
    CHECK_THROWS_AS(vemse(data, p), InvalidParameter);
    p = {};
    p.lag = 0;
    CHECK_THROWS_AS(vemse(data, p), InvalidParameter);
    p = {};
    p.tolerance.value = 0.0;
    CHECK_THROWS_AS(vemse(data, p), InvalidParameter);
    p = {};
    p.scales = {2, 1};
    CHECK_THROWS_AS(vemse(data, p), InvalidParameter);
    MmseParams mp = MmseParams::uniform(2, 2, 1, {1}, ToleranceRule::trace(0.15));
    CHECK_THROWS_AS(mmse(data, mp), InvalidParameter);

    CHECK_THROWS_AS(MultichannelSeries({{1, 2}, {1}}), InvalidParameter);
    CHECK_THROWS_AS(MultichannelSeries({{1, NAN}}), InvalidParameter);
    CHECK_THROWS_AS(MultichannelSeries(std::vector<Samples>{}), InvalidParameter);
}
