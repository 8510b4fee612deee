#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "brute.hpp"
#include "gen.hpp"
#include "hk/fforacle.hpp"

using namespace hk;
using hktest::Gen;

namespace {

MPoly sum2() { return parse_mpoly("x0+x1"); }

hktest::Terms terms_of(const MPoly& f) {
    hktest::Terms t;
    for (const auto& [e, c] : f.terms) t[e] = c.get_si();
    return t;
}

}  // namespace

TEST_CASE("polynomial syntax") {
    MPoly f = parse_mpoly("x0^3+x1^3+x2^3");
    CHECK(f.n_vars == 3);
    CHECK(f.terms.size() == 3);
    CHECK(parse_mpoly("x^2*y - 3 z").terms.size() == 2);
    CHECK(parse_mpoly("x+x").terms.at({1}) == 2);
    CHECK(parse_mpoly("2x0x1").terms.at({1, 1}) == 2);
    CHECK_THROWS_AS(parse_mpoly(""), UserError);
    CHECK_THROWS_AS(parse_mpoly("x^"), UserError);
    CHECK((sum2() * sum2()) .terms.at({1, 1}) == 2);
    CHECK(sum2().pow(3).terms.at({2, 1}) == 3);
}

TEST_CASE("staircase quotient") {
    CHECK(StaircaseQuotient(3, {2, 3, 4}).dimension() == 24);
    CHECK_THROWS_AS(StaircaseQuotient(4, {2}), UserError);
    CHECK_THROWS_AS(StaircaseQuotient(2, {0, 1}), UserError);
}

TEST_CASE("quotient_length examples") {
    CHECK(quotient_length(StaircaseQuotient(2, {1, 1}), sum2(), 1) == 1);
    CHECK(quotient_length(StaircaseQuotient(5, {2, 2}), sum2(), 2) == 3);
    for (unsigned p : {0u, 2u, 3u}) CHECK(quotient_length(StaircaseQuotient(p, {3, 4}), sum2(), 0) == 0);
    CHECK_THROWS_AS(quotient_length(StaircaseQuotient(2, {2, 2}), parse_mpoly("1+x0"), 1), UserError);
}

TEST_CASE("jordan_profile examples") {
    JordanProfile a = jordan_profile(StaircaseQuotient(2, {1, 1}), sum2());
    CHECK(a.e == std::map<long, long>{{1, 1}});
    JordanProfile b = jordan_profile(StaircaseQuotient(2, {2, 2}), sum2());
    long total = 0;
    for (auto [i, m] : b.e) total += i * m;
    CHECK(total == 4);
    CHECK(b.l.at(2) == d_integer(2, {2, 2}, 2));
    CHECK(b.l.at(2) == 4 * d_integer(2, {1, 1}, 1));
    JordanProfile c = jordan_profile(StaircaseQuotient(3, {3, 3}), sum2());
    total = 0;
    for (auto [i, m] : c.e) total += i * m;
    CHECK(total == 9);
}

TEST_CASE("h_e_point examples") {
    MPoly cubic = parse_mpoly("x^3+y^3+z^3");
    CHECK(h_e_point(2, 3, cubic, rat(1, 8)) == rat(9, 16) * rat(1, 2));
    for (unsigned p : {2u, 3u, 5u})
        for (int n = 1; n <= 4; ++n) {
            MPoly xn = parse_mpoly("x^" + std::to_string(n));
            long q = p * p;
            for (long k = 0; k <= q; ++k) {
                Rational t = rat(k, q);
                if (t * n >= 1) CHECK(h_e_point(p, 2, xn, t) == 1);
            }
        }
    CHECK(h_e_point(3, 1, parse_mpoly("x^2+y^2"), rat(1, 3)) == rat(5, 9));
    CHECK_THROWS_AS(h_e_point(3, 1, parse_mpoly("x^2+y^2"), rat(1, 2)), UserError);
}

TEST_CASE("f_threshold_at_q") {
    for (unsigned p : {2u, 3u})
        for (int n = 1; n <= 4; ++n)
            for (int e = 1; e <= 2; ++e) {
                long q = e == 1 ? p : p * p;
                Rational want = Rational((q + n - 1) / n) / q;
                CHECK(f_threshold_at_q(StaircaseQuotient(p, {int(q)}), parse_mpoly("x^" + std::to_string(n)), q) == want);
            }
    long least = 0;
    for (long i = 1; least == 0; ++i)
        if (hktest::brute_length(2, {4, 4}, terms_of(sum2()), i) == 16) least = i;
    CHECK(f_threshold_at_q(StaircaseQuotient(2, {4, 4}), sum2(), 4) == Rational(least) / 4);
    // (xy)^i lies in (x^q, y^q) exactly when i >= q
    for (long q : {2L, 4L, 8L})
        CHECK(f_threshold_at_q(StaircaseQuotient(2, {int(q), int(q)}), parse_mpoly("x*y"), q) == 1);
}

TEST_CASE("d_integer examples") {
    CHECK(d_integer(0, {1, 2}, 2) == 2);
    CHECK(d_integer(0, {1, 1}, 1) == 1);
    for (unsigned ch : {0u, 2u, 3u}) CHECK(d_integer(ch, {3, 2}, 0) == 0);
    CHECK(d_integer(0, {2, 2}, 2) == 3);
    CHECK(d_integer(2, {2, 2}, 2) == 4);
}

TEST_CASE("han_data examples") {
    HanData h = han_data(0, {1, 1, 1});
    CHECK(h.l == 1);
    Gen g(4);
    for (int i = 0; i < 20; ++i) {
        Rational r1 = g.unit(9), r2 = g.unit(9), r3 = g.unit(9);
        CHECK(h.phi_at({r1, r2, r3}) == 1 + r1 * r2 + r1 * r3);
    }
    HanData z = han_data(0, {0, 0, 0});
    CHECK(z.l == 1);
    for (const auto& c : z.phi) CHECK(c == 0);
    HanData h3 = han_data(3, {1, 1, 1});
    CHECK(h3.l == h.l);
    CHECK(h3.phi == h.phi);
}

TEST_CASE("bphi_coeff examples") {
    CHECK(bphi_coeff(0, {1, 1}, 2) == 0);
    CHECK(bphi_coeff(0, {1, 1}, 1) == 1);
    for (unsigned p : {2u, 3u}) {
        JordanProfile j = jordan_profile(StaircaseQuotient(p, {2, 2}), sum2());
        for (long r = 1; r <= 5; ++r) {
            long e = j.e.count(r) ? j.e.at(r) : 0;
            CHECK(bphi_coeff(p, {2, 2}, r) == e);
        }
    }
}

TEST_CASE("discrete_multilinear_check examples") {
    std::vector<MPoly> sq{parse_mpoly("x^2"), parse_mpoly("x^2")};
    for (long r = 0; r <= 4; ++r) CHECK(discrete_multilinear_check(2, 1, sq, r));
    std::vector<MPoly> cu{parse_mpoly("x^3"), parse_mpoly("x^3")};
    for (long r = 0; r <= 6; ++r) CHECK(discrete_multilinear_check(3, 1, cu, r));
    std::vector<MPoly> mixed{parse_mpoly("x^2+y^3"), parse_mpoly("x")};
    for (long r = 0; r <= 8; ++r) CHECK(discrete_multilinear_check(2, 2, mixed, r));
}

TEST_CASE("cache round trip") {
    (void)han_data(3, {2, 1, 2});
    std::string path = "han_cache_test.json";
    han_cache_save(path);
    std::size_t n = han_cache_size();
    han_cache_load(path);
    CHECK(han_cache_size() >= n);
    std::remove(path.c_str());
}

TEST_CASE("property: lengths match an independent brute-force rank") {
    Gen g(77);
    const char* polys[] = {"x0+x1", "x0^2+x1^2", "x0*x1", "x0^2+x1*x2", "x0^3+x1^2+x0*x1", "x0+x1+x2"};
    for (int i = 0; i < 60; ++i) {
        MPoly f = parse_mpoly(polys[g.uniform(0, 5)]);
        unsigned p = std::vector<unsigned>{0, 2, 3, 5}[g.uniform(0, 3)];
        std::vector<int> b(f.n_vars);
        for (auto& x : b) x = int(g.uniform(1, f.n_vars == 3 ? 4 : 6));
        long r = g.uniform(0, 8);
        CHECK(quotient_length(StaircaseQuotient(p, b), f, r) == hktest::brute_length(p, b, terms_of(f), r));
    }
}

TEST_CASE("property: lengths increase and are concave; profile multiplicities") {
    Gen g(88);
    for (int i = 0; i < 30; ++i) {
        unsigned p = std::vector<unsigned>{0, 2, 3}[g.uniform(0, 2)];
        std::vector<int> b{int(g.uniform(1, 6)), int(g.uniform(1, 6))};
        StaircaseQuotient q(p, b);
        JordanProfile j = jordan_profile(q, sum2());
        for (std::size_t k = 1; k < j.l.size(); ++k) CHECK(j.l[k] >= j.l[k - 1]);
        for (std::size_t k = 1; k + 1 < j.l.size(); ++k) CHECK(2 * j.l[k] >= j.l[k - 1] + j.l[k + 1]);
        long total = 0;
        for (auto [size, m] : j.e) {
            CHECK(m >= 0);
            total += size * m;
        }
        CHECK(total == q.dimension());
        CHECK(j.l.back() == q.dimension());
    }
}

TEST_CASE("property: d_integer symmetry and non-triangle products") {
    Gen g(99);
    for (int i = 0; i < 60; ++i) {
        unsigned ch = std::vector<unsigned>{0, 2, 3, 5}[g.uniform(0, 3)];
        std::vector<long> t{g.uniform(0, 5), g.uniform(0, 5), g.uniform(0, 4)};
        long r = g.uniform(0, 8);
        long base = d_integer(ch, t, r);
        std::vector<long> perm = t;
        std::sort(perm.begin(), perm.end());
        do {
            CHECK(d_integer(ch, perm, r) == base);
        } while (std::next_permutation(perm.begin(), perm.end()));
        long a = g.uniform(0, 6), b = g.uniform(0, 6);
        CHECK(d_integer(ch, {a, b}, a + b + g.uniform(0, 3)) == a * b);
    }
}

TEST_CASE("property: characteristic stabilisation") {
    for (long a = 1; a <= 3; ++a)
        for (long b = 1; b <= 3; ++b)
            for (long r = 0; r <= a + b; ++r) {
                long zero = d_integer(0, {a, b}, r);
                for (unsigned p : {5u, 7u, 11u}) CHECK(d_integer(p, {a, b}, r) == zero);
            }
}

TEST_CASE("property: Han identity D(qt + r) = l(t) D(r or reflected) + q^2 phi_t(r/q)") {
    Gen g(123);
    for (int i = 0; i < 60; ++i) {
        unsigned p = std::vector<unsigned>{2, 3}[g.uniform(0, 1)];
        long q = p;
        std::vector<long> t{g.uniform(0, 2), g.uniform(0, 2), g.uniform(0, 2)};
        HanData h = han_data(p, t);
        std::vector<long> r{g.uniform(0, q), g.uniform(0, q), g.uniform(0, q)};
        std::vector<long> big{q * t[0] + r[0], q * t[1] + r[1]};
        long lhs = d_integer(p, big, q * t[2] + r[2]);
        std::vector<long> rr{h.odd ? q - r[0] : r[0], r[1]};
        std::vector<Rational> rq{rat(r[0], q), rat(r[1], q), rat(r[2], q)};
        Rational rhs = Rational(h.l * d_integer(p, rr, r[2])) + Rational(q * q) * h.phi_at(rq);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("property: discrete multilinear formula") {
    Gen g(321);
    for (int i = 0; i < 20; ++i) {
        unsigned p = std::vector<unsigned>{2, 3}[g.uniform(0, 1)];
        std::vector<MPoly> fs{parse_mpoly("x^" + std::to_string(g.uniform(1, 3))),
                              parse_mpoly("x^" + std::to_string(g.uniform(1, 3)))};
        long r = g.uniform(0, 2 * p);
        CHECK(discrete_multilinear_check(p, 1, fs, r));
    }
}
