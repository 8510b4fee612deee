#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gen.hpp"
#include "hk/compose.hpp"
#include "hk/fermat.hpp"
#include "hk/kernels.hpp"

using namespace hk;
using hktest::Gen;

namespace {

Poly P(std::vector<Rational> c) { return Poly(std::move(c)); }

// Cube formula for the limit kernel, independent of the library tables.
Rational dinf_cube(Rational a, Rational b, Rational c) {
    if (a <= 0 || b <= 0 || c <= 0) return 0;
    std::array<Rational, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    if (t[0] + t[1] <= t[2]) return t[0] * t[1];
    Rational s = t[0] + t[1] + t[2], q = t[0] * t[1] + t[0] * t[2] + t[1] * t[2];
    if (s >= 2) return 1 - s + q;
    return (4 * q - s * s) / 4;
}

// 1 - (1 - ra)(1 - rb) + uv D((1 - ra)/u, (1 - rb)/v, cr), clamped to 1.
std::optional<Rational> binomial_closed(const Binomial& B, const Rational& r) {
    if (r * B.a >= 1 || r * B.b >= 1) return Rational(1);
    Rational x = (1 - r * B.a) / B.u, y = (1 - r * B.b) / B.v, z = r * B.c;
    if (x > 1 || y > 1 || z > 1) return std::nullopt;
    return 1 - (1 - r * B.a) * (1 - r * B.b) + Rational(B.u * B.v) * dinf_cube(x, y, z);
}

void check_h_shape(const HFunction& h) {
    CHECK(h(0) == 0);
    CHECK(h.h.value_right_of(0) == 0);
    CHECK(h.h.is_continuous());
    Rational prev = 0;
    const int N = 60;
    for (int k = 0; k <= N; ++k) {
        Rational t = rat(k, N);
        Rational v = h(t);
        CHECK(v >= prev);
        CHECK(v <= 1);
        prev = v;
        if (k > 0 && k < N) CHECK(h(t - rat(1, N)) + h(t + rat(1, N)) <= 2 * v);
    }
    Rational lo = -1, hi = h.h.hi() + 1;
    CHECK(measure_pair(PiecewisePoly::from_poly(P({1}), lo, hi), h.mu) == 0);
    CHECK(measure_pair(PiecewisePoly::from_poly(P({0, 1}), lo, hi), h.mu) == h.h.right());
}

}  // namespace

TEST_CASE("independent cube formula sanity") {
    CHECK(dinf_cube(rat(1, 2), rat(1, 2), rat(1, 2)) == rat(3, 16));
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b)
            for (int c = 0; c <= 8; ++c)
                CHECK(dinf_cube(rat(a, 8), rat(b, 8), rat(c, 8)) == dinf_eval(rat(a, 8), rat(b, 8), rat(c, 8)));
}

TEST_CASE("h_pure_power") {
    HFunction h1 = h_pure_power(1);
    CHECK(h1(rat(1, 2)) == rat(1, 2));
    CHECK(h1(3) == 1);
    HFunction h3 = h_pure_power(3);
    CHECK(h3.e_hk == 3);
    REQUIRE(h3.fsig);
    CHECK(*h3.fsig == 0);
    CHECK(h3.threshold == rat(1, 3));
    Measure want({{0, -2}, {rat(1, 2), 2}}, std::nullopt, {0, EndSign::Minus}, {rat(1, 2), EndSign::Plus});
    CHECK(h_pure_power(2).mu == want);
    CHECK_THROWS_AS(h_pure_power(0), UserError);
}

TEST_CASE("h_monomial_volume") {
    for (int n = 1; n <= 5; ++n)
        for (int k = 0; k <= 12; ++k) {
            Rational t = rat(k, 12);
            CHECK(h_monomial_volume({{1}}, {{Rational(n)}}, {t}) == std::min<Rational>(Rational(n) * t, Rational(1)));
        }
    for (int k = 0; k <= 12; ++k) {
        Rational t = rat(k, 12);
        CHECK(h_monomial_volume({{1, 0}, {0, 1}}, {{1, 1}}, {t}) == 2 * t - t * t);
    }
    CHECK(h_monomial_volume({{1, 0}, {0, 1}}, {{1, 1}}, {0}) == 0);
    CHECK(h_monomial_volume({{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}, {rat(-1, 2), rat(1, 2)}) == 0);
    CHECK_THROWS_AS(h_monomial_volume({{1, 1}}, {{1, 1}}, {rat(1, 2)}), UserError);
}

TEST_CASE("h_monomial_volume agrees with the oracle for monomials") {
    Gen g(6);
    for (int i = 0; i < 15; ++i) {
        int a = int(g.uniform(0, 3)), b = int(g.uniform(1, 3));
        MPoly f;
        f.n_vars = 2;
        f.terms[{a, b}] = 1;
        for (int k = 0; k <= 4; ++k) {
            Rational t = rat(k, 4);
            CHECK(h_monomial_volume({{1, 0}, {0, 1}}, {{Rational(a), Rational(b)}}, {t}) ==
                  h_e_point(2, 2, f, t));
        }
    }
}

TEST_CASE("compose_diag_inf examples") {
    HFunction quad = compose_diag_inf(h_pure_power(2), 2);
    CHECK(quad.h == PiecewisePoly::from_poly(P({0, 2, -1}), 0, 1));
    for (int n : {2, 3, 4, 5, 7}) {
        Rational N = n;
        HFunction a = compose_diag_inf(compose_diag_inf(h_pure_power(2), 2), n);
        CHECK(a.h.pieces().front() == P({0, (2 * N - 1) / N, 0, -N / 3}));
        CHECK(a.h.breakpoints()[1] == rat(1, n));
        if (n > 2) CHECK(a.h(rat(1, 2)) == 1 - rat(1, 4) - 1 / (3 * N * N));
        CHECK(a.e_hk == 2 - 1 / N);
    }
}

TEST_CASE("E7 chain") {
    Binomial b7{1, 0, 2, 3, 1};
    HFunction in7 = h_binomial_inf(b7);
    PiecewisePoly inner({0, rat(1, 9), rat(5, 9)},
                        {P({0, 3}), P({rat(-1, 24), rat(15, 4), rat(-27, 8)})}, 0, 1);
    CHECK(in7.h == inner);
    for (int k = 0; k <= 36; ++k) CHECK(in7(rat(k, 36)) == *binomial_closed(b7, rat(k, 36)));
    CompareReport c = oracle_compare(h_binomial_p(5, b7).fn, binomial_poly(b7), 5, 2, grid_points(rat(1, 25), 1));
    CHECK(c.max_abs == 0);
    HFunction e7 = compose_diag_inf(in7, 2);
    std::vector<Rational> bp{0, rat(1, 18), rat(7, 18), rat(11, 18), rat(17, 18), 1};
    CHECK(e7.h.breakpoints() == bp);
    CHECK(e7.h.pieces().front() == P({0, rat(95, 48), 0, rat(-9, 4)}));
    CHECK(e7.e_hk == rat(95, 48));
    REQUIRE(e7.fsig);
    CHECK(*e7.fsig == rat(1, 48));
    check_h_shape(e7);
}

TEST_CASE("D_{n+1} chain") {
    for (int n = 3; n <= 6; ++n) {
        Binomial B{0, 2, 1, n - 2, 1};
        HFunction inner = h_binomial_inf(B);
        CHECK(inner.h.pieces().front() == P({0, 3, -2}));
        CHECK(inner.h.breakpoints()[1] == rat(1, 2));
        HFunction d = compose_diag_inf(inner, 2);
        check_h_shape(d);
        CHECK(d(1) == 1);
        CHECK(d.h.pieces().front() == P({0, 2, rat(-1, 2), rat(-2, 3)}));
        CHECK(d.h.pieces().back() == P({rat(-1, 6), 3, rat(-5, 2), rat(2, 3)}));
        CHECK(d.e_hk == 2);
        MPoly f = parse_mpoly("x^2+y*z^2+z^" + std::to_string(n));
        LazyHEvaluator d3 = compose_diag_p(3, inner, 2);
        for (const auto& t : grid_points(rat(1, 9), 1)) {
            CHECK(d3(t) == h_e_point(3, 2, f, t));
            CHECK(d3(t) >= d(t));
        }
    }
}

TEST_CASE("compose_diag_p examples") {
    LazyHEvaluator two_cubes = compose_diag_p(2, h_pure_power(3), 3);
    for (int k = 0; k <= 12; ++k) {
        Rational t = rat(k, 12);
        CHECK(two_cubes(t) == 9 * dp_eval(2, {rat(1, 3), rat(1, 3), t}));
        if (2 * t >= 1) CHECK(two_cubes(t) == 1);
    }
    LazyHEvaluator q3 = compose_diag_p(3, h_pure_power(2), 2);
    Gen g(9);
    for (int i = 0; i < 30; ++i) {
        Rational t = g.unit(40);
        CHECK(q3(t) == 2 * t - t * t);
    }
    CHECK(compose_diag_p(2, h_pure_power(2), 2)(rat(1, 2)) == 1);
    Measure cubic({}, PiecewisePoly::from_poly(P({0, 1}), 0, 1), {0, EndSign::Minus}, {1, EndSign::Plus});
    CHECK_THROWS_AS(compose_diag_p(3, cubic, 2)(rat(1, 3)), UserError);
}

TEST_CASE("binomial examples") {
    HFunction lin = h_binomial_inf({0, 0, 1, 1, 1});
    for (int k = 0; k <= 12; ++k) CHECK(lin(rat(k, 12)) == rat(k, 12));
    HFunction d = h_binomial_inf({0, 2, 1, 1, 1});
    CHECK(d.h.pieces().front() == P({0, 3, -2}));
}

TEST_CASE("ehk, fsig and threshold") {
    for (int n = 2; n <= 6; ++n) {
        HFunction a = diagonal_inf({2, 2, n});
        CHECK(ehk(a) == 2 - rat(1, n));
        HFunction pp = h_pure_power(n);
        CHECK(*fsig(pp) == 0);
        CHECK(threshold(pp) == rat(1, n));
    }
}

TEST_CASE("segre_product_h") {
    for (int l = 1; l <= 3; ++l) {
        HFunction s = segre_product_h(l);
        CHECK(s.e_hk == Rational(1L << l));
        CHECK(s(rat(1, 3)) == Rational(1L << l) / 3);
    }
}

TEST_CASE("oracle_compare examples") {
    CompareReport q = oracle_compare([](const Rational& t) { return diagonal_inf({2, 2, 2, 2})(t); },
                                     diagonal_poly({2, 2, 2, 2}), 3, 2, grid_points(rat(1, 9), 1));
    CHECK(q.min_gap >= 0);
    CHECK(q.max_gap > 0);
    HFunction c = diagonal_inf({3, 3, 3});
    CHECK_THROWS_AS(diagonal_p(2, {3, 3, 3}), UserError);
    CHECK(diagonal_p(2, {3, 3})(rat(1, 8)) == h_e_point(2, 3, diagonal_poly({3, 3}), rat(1, 8)));
    CompareReport b = oracle_compare(h_binomial_p(3, {1, 1, 1, 1, 1}).fn, binomial_poly({1, 1, 1, 1, 1}), 3, 2,
                                     grid_points(rat(1, 9), 1));
    CHECK(b.max_abs == 0);
}

TEST_CASE("two-variable diagonal middle piece") {
    for (int d1 = 2; d1 <= 5; ++d1)
        for (int d2 = d1; d2 <= 6; ++d2) {
            HFunction h = compose_diag_inf(h_pure_power(d1), d2);
            Rational a = d1, b = d2;
            // the middle interval is |1/d1 - 1/d2| <= t <= 1/d1 + 1/d2 when that is <= 1
            Rational m1 = 1 / a - 1 / b, m2 = 1 / a + 1 / b;
            if (m2 > 1) m2 = 1;
            for (int k = 1; k < 8; ++k) {
                Rational t = m1 + (m2 - m1) * rat(k, 8);
                Rational want = (2 * a * t + 2 * b * t + 2 - a * b * t * t - a / b - b / a) / 4;
                CHECK(h(t) == want);
            }
        }
}

TEST_CASE("diagonal towers agree with the s-fold kernel") {
    for (int d = 2; d <= 4; ++d) {
        HFunction h = diagonal_inf({d, d, d});
        Rational inv = rat(1, d);
        for (int k = 0; k <= 16; ++k) {
            Rational r = rat(k, 16);
            CHECK(Rational(d * d * d) * ds_inf_eval({inv, inv, inv}, r) == h(r));
        }
    }
}

TEST_CASE("quadric reductions in the limit") {
    for (int n = 2; n <= 7; ++n) {
        HFunction top = fermat_phi(2, n), mid = fermat_phi(2, n - 1), low = fermat_phi(2, n - 2);
        CHECK(top.e_hk == 2 * mid(rat(1, 2)));
        CHECK(top.e_hk == 2 * low.h.integral(0, 1));
    }
}

TEST_CASE("property: limit h-functions are normalised, increasing and concave") {
    Gen g(2718);
    for (int i = 0; i < 40; ++i) {
        std::vector<int> degs(g.uniform(1, 3));
        for (auto& d : degs) d = int(g.uniform(1, 5));
        check_h_shape(diagonal_inf(degs));
        Binomial B{int(g.uniform(0, 2)), int(g.uniform(0, 2)), int(g.uniform(1, 3)), int(g.uniform(1, 3)),
                   int(g.uniform(1, 2))};
        HFunction hb = h_binomial_inf(B);
        check_h_shape(hb);
        for (int k = 0; k <= 24; ++k) {
            Rational r = rat(k, 24);
            if (auto want = binomial_closed(B, r)) CHECK(hb(r) == *want);
        }
    }
}

TEST_CASE("property: characteristic-p evaluators match the oracle") {
    Gen g(31415);
    for (int i = 0; i < 25; ++i) {
        Binomial B{int(g.uniform(0, 2)), int(g.uniform(0, 2)), int(g.uniform(1, 3)), int(g.uniform(1, 3)),
                   int(g.uniform(1, 2))};
        unsigned p = g.coin() ? 2 : 3;
        long q = p * p;
        CompareReport c = oracle_compare(h_binomial_p(p, B).fn, binomial_poly(B), p, 2, grid_points(rat(1, q), 1));
        CHECK(c.max_abs == 0);
        std::vector<int> degs{int(g.uniform(1, 4)), int(g.uniform(1, 4))};
        CompareReport d = oracle_compare(diagonal_p(p, degs).fn, diagonal_poly(degs), p, 2, grid_points(rat(1, q), 1));
        CHECK(d.max_abs == 0);
    }
}

TEST_CASE("property: characteristic p sits above the limit on quadric towers") {
    for (int n = 1; n <= 3; ++n) {
        std::vector<int> degs(n + 1, 2);
        HFunction lim = diagonal_inf(degs);
        for (unsigned p : {3u, 5u}) {
            int e = p == 3 ? 2 : 1;
            long q = p == 3 ? 9 : 5;
            CompareReport c = oracle_compare([&](const Rational& t) { return lim(t); }, diagonal_poly(degs), p,
                                             e, grid_points(rat(1, q), 1));
            CHECK(c.min_gap >= 0);
        }
    }
}
