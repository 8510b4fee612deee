#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "gen.hpp"
#include "hk/compose.hpp"
#include "hk/exactnum.hpp"
#include "hk/json_io.hpp"
#include "hk/kernels.hpp"

using namespace hk;
using hktest::Gen;

namespace {

Rational R(const char* s) { return parse_rational(s); }

PiecewisePoly min_nt(long n) {
    return PiecewisePoly({0, rat(1, n)}, {Poly({0, Rational(n)})}, 0, 1);
}

PiecewisePoly two_t_minus_t2() { return PiecewisePoly::from_poly(Poly({0, 2, -1}), 0, 1); }

PiecewisePoly ramp(const Rational& lo, const Rational& hi) {
    return PiecewisePoly::from_poly(Poly({0, 1}), lo, hi);
}

PiecewisePoly one(const Rational& lo, const Rational& hi) {
    return PiecewisePoly::from_poly(Poly({1}), lo, hi);
}

// Random continuous, increasing, concave h with h(0) = 0 and pieces of degree <= 2.
PiecewisePoly random_concave(Gen& g) {
    int k = static_cast<int>(g.uniform(1, 4));
    std::vector<Rational> bp{0};
    for (const auto& b : g.sorted_distinct(k, 12)) bp.push_back(b);
    bp.push_back(1);
    std::vector<Poly> pieces;
    Rational value = 0, slope = g.rational(1, 4, 3);
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        Rational w = bp[i + 1] - bp[i];
        Rational curv = g.coin() ? Rational(0) : slope / w * g.unit(4);
        Poly local({value, slope, -curv / 2});
        pieces.push_back(local.compose_affine(1, -bp[i]));
        value = local(w);
        slope -= curv * w;
        slope -= slope * g.unit(3);  // downward kink
    }
    return PiecewisePoly(bp, pieces, 0, value);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps,
                        int depth) {
    double c = (a + b) / 2, fa = f(a), fb = f(b), fc = f(c);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double a, double b, double fa, double fm, double fb, double whole, int d) {
            double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
            double flm = f(lm), frm = f(rm);
            double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
            if (d <= 0 || std::fabs(left + right - whole) <= 15 * eps)
                return left + right + (left + right - whole) / 15;
            return rec(a, m, fa, flm, fm, left, d - 1) + rec(m, b, fm, frm, fb, right, d - 1);
        };
    return rec(a, b, fa, fc, fb, (b - a) / 6 * (fa + 4 * fc + fb), depth);
}

}  // namespace

TEST_CASE("rationals are canonical and parse strictly") {
    CHECK(R("6/4") == rat(3, 2));
    CHECK(to_string(R("-6/4")) == "-3/2");
    CHECK(R("-6/4").get_den() > 0);
    CHECK(to_string(R("8/4")) == "2");
    CHECK_THROWS_AS(R("1/0"), UserError);
    CHECK_THROWS_AS(R("abc"), UserError);
    CHECK_THROWS_AS(R(""), UserError);
    CHECK_THROWS_AS(R("1/-2"), UserError);
    CHECK(floor_q(rat(-1, 2)) == -1);
    CHECK(floor_q(rat(7, 3)) == 2);
}

TEST_CASE("poly canonical form") {
    Poly p({1, 2, 0, 0});
    CHECK(p.degree() == 1);
    CHECK(Poly().degree() == -1);
    CHECK((p - p).is_zero());
    CHECK((p - p).degree() == -1);
    Poly sq = p * p;
    CHECK(sq == Poly({1, 4, 4}));
    CHECK(sq.derivative() == Poly({4, 8}));
    CHECK(sq.antiderivative().derivative() == sq);
    CHECK(p.compose_affine(2, 1) == Poly({3, 4}));
}

TEST_CASE("interpolation recovers a cubic") {
    Poly c({rat(1, 3), -2, 0, rat(5, 7)});
    std::vector<Rational> xs{0, 1, rat(1, 2), 3}, ys;
    for (const auto& x : xs) ys.push_back(c(x));
    CHECK(interpolate(xs, ys) == c);
}

TEST_CASE("pp_eval") {
    CHECK(pp_eval(min_nt(3), rat(1, 3)) == 1);
    CHECK(pp_eval(two_t_minus_t2(), rat(1, 2)) == rat(3, 4));
    CHECK_THROWS(PiecewisePoly({0, rat(1, 2), rat(1, 2), 1}, {Poly(), Poly(), Poly()}, 0, 0));
    HFunction an = diagonal_inf({2, 2, 2});
    CHECK(pp_eval(an.h, rat(1, 2)) == 2 * rat(1, 2) - rat(1, 4) - rat(1, 12));
    CHECK(pp_eval(min_nt(3), 5) == 1);
    CHECK(pp_eval(min_nt(3), -1) == 0);
}

TEST_CASE("ambiguous evaluation names the breakpoint") {
    PiecewisePoly step({0, 1, 2}, {Poly({0}), Poly({1})}, 0, 1);
    try {
        (void)pp_eval(step, 1);
        FAIL("expected an error");
    } catch (const UserError& e) {
        CHECK(std::string(e.what()).find("breakpoint 1") != std::string::npos);
    }
    CHECK(step.value_left_of(1) == 0);
    CHECK(step.value_right_of(1) == 1);
    CHECK_FALSE(step.is_continuous());
}

TEST_CASE("pp_integral") {
    CHECK(pp_integral(two_t_minus_t2(), 0, 1) == rat(2, 3));
    CHECK(pp_integral(PiecewisePoly::from_poly(Poly(), 0, 1), 0, 1) == 0);
    CHECK(pp_integral(min_nt(2), 0, 1) == rat(3, 4));
    CHECK(pp_integral(min_nt(2), 0, 3) == rat(11, 4));
}

TEST_CASE("pp_derivative_side") {
    CHECK(pp_derivative_side(min_nt(3), 0, Side::Plus) == 3);
    CHECK(pp_derivative_side(min_nt(3), rat(1, 3), Side::Minus) == 3);
    CHECK(pp_derivative_side(min_nt(3), rat(1, 3), Side::Plus) == 0);
    CHECK(pp_derivative_side(two_t_minus_t2(), 1, Side::Minus) == 0);
}

TEST_CASE("neg_dh_measure") {
    for (long n = 1; n <= 6; ++n) {
        Measure m = neg_dh_measure(min_nt(n));
        Measure want({{0, Rational(-n)}, {rat(1, n), Rational(n)}}, std::nullopt,
                     {0, EndSign::Minus}, {rat(1, n), EndSign::Plus});
        CHECK(m == want);
        CHECK_FALSE(m.has_density());
    }
    Measure q = neg_dh_measure(two_t_minus_t2());
    REQUIRE(q.has_density());
    CHECK(q.density()->pieces().front() == Poly({2}));
    CHECK(q.atoms().front().loc == 0);
    CHECK(q.atoms().front().mass == -2);
    CHECK(q.atoms().back().loc == 1);
    CHECK(q.atoms().back().mass == 0);
}

TEST_CASE("neg_dh_measure of the E7 inner factor") {
    // h of y^3 + y z^3: slope 3 up to 1/9, concave quadratic to 5/9, flat from 5/9.
    HFunction in7 = h_binomial_inf({1, 0, 2, 3, 1});
    Measure m = in7.mu.without_zero_atoms();
    REQUIRE(m.has_density());
    const PiecewisePoly& d = *m.density();
    CHECK(d(rat(1, 3)) == rat(27, 4));
    CHECK(d(rat(1, 18)) == 0);
    CHECK(d(rat(3, 4)) == 0);
    REQUIRE(m.atoms().size() == 1);
    CHECK(m.atoms()[0].loc == 0);
    CHECK(m.atoms()[0].mass == -3);
    // jump of h' is 0 at 1/9 and 5/9 since the slopes match on both sides
    CHECK(in7.h.derivative_side(rat(1, 9), Side::Minus) == in7.h.derivative_side(rat(1, 9), Side::Plus));
}

TEST_CASE("measure_pair") {
    Measure m3 = neg_dh_measure(min_nt(3));
    CHECK(measure_pair(ramp(-1, 2), m3) == 1);
    CHECK(measure_pair(one(-1, 2), m3) == 0);
    CHECK(measure_pair(ramp(-1, 2), neg_dh_measure(two_t_minus_t2())) == 1);
    Measure open({{0, 5}}, std::nullopt, {0, EndSign::Plus}, {1, EndSign::Plus});
    CHECK(measure_pair(one(-1, 2), open) == 0);
    Measure closed({{1, 5}}, std::nullopt, {0, EndSign::Minus}, {1, EndSign::Minus});
    CHECK(measure_pair(one(-1, 2), closed) == 0);
    Measure plus({{1, 5}}, std::nullopt, {0, EndSign::Minus}, {1, EndSign::Plus});
    CHECK(measure_pair(one(-1, 2), plus) == 5);
}

TEST_CASE("slice_pair examples") {
    Piecewise2D K = dinf_slice(rat(1, 2));
    Measure phi0({{rat(1, 2), 2}, {0, -2}}, std::nullopt, {0, EndSign::Minus}, {rat(1, 2), EndSign::Plus});
    PiecewisePoly s = slice_pair(K, phi0);
    for (int k = 0; k <= 24; ++k) {
        Rational x = rat(k, 24);
        CHECK(s(x) == 2 * dinf_eval(x, rat(1, 2), rat(1, 2)));
    }
    Measure zero({}, std::nullopt, {0, EndSign::Minus}, {1, EndSign::Plus});
    PiecewisePoly z = slice_pair(K, zero);
    for (int k = 0; k <= 8; ++k) CHECK(z(rat(k, 8)) == 0);
}

TEST_CASE("slice_pair against a density reproduces the composed h of x^2 + y^2 + z^2") {
    // phi_1 = 2t - t^2, mu_1 = 2 chi_(0,1) - 2 delta_0; phi_2(x) = int 2 D_inf(x, t, 1/2) dmu_1
    Piecewise2D K = dinf_slice(rat(1, 2)).scaled(2);
    PiecewisePoly s = slice_pair(K, neg_dh_measure(two_t_minus_t2()));
    HFunction phi2 = diagonal_inf({2, 2, 2});
    for (int k = 0; k <= 36; ++k) CHECK(s(rat(k, 36)) == phi2(rat(k, 36)));
}

TEST_CASE("unsupported boundary slope is a structural error") {
    Region reg;
    reg.label = "r";
    reg.ineqs = {HalfPlane{2, 1, 0}};
    reg.poly.c = {{Rational(0)}};
    CHECK_THROWS_AS((void)Piecewise2D(0, 1, 0, Rational(1), {reg}).lines(), UserError);
}

TEST_CASE("JSON round trips are the identity") {
    Gen g(11);
    for (int i = 0; i < 50; ++i) {
        PiecewisePoly h = random_concave(g);
        CHECK(pp_from_json(to_json(h)) == h);
        Measure m = neg_dh_measure(h);
        CHECK(measure_from_json(to_json(m)) == m);
        Rational q = g.rational(-5, 5, 97);
        CHECK(rational_from_json(to_json(q)) == q);
    }
    Piecewise2D K = dinf_slice(rat(1, 3));
    Piecewise2D back = piecewise2d_from_json(to_json(K));
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 12; ++b) CHECK(back(rat(a, 6), rat(b, 6)) == K(rat(a, 6), rat(b, 6)));
    CHECK(to_json(two_t_minus_t2()).dump() ==
          R"({"breakpoints":["0","1"],"pieces":[["0","2","-1"]],"left":"0","right":"1"})");
}

TEST_CASE("property: total mass zero and first moment equals the limit") {
    Gen g(2024);
    for (int i = 0; i < 200; ++i) {
        PiecewisePoly h = random_concave(g);
        Measure m = neg_dh_measure(h);
        CHECK(measure_pair(one(-1, 2), m) == 0);
        CHECK(measure_pair(ramp(-1, 2), m) == h.right());
    }
}

TEST_CASE("property: integral is additive and inverts the derivative") {
    Gen g(7);
    for (int i = 0; i < 100; ++i) {
        PiecewisePoly h = random_concave(g);
        Rational a = g.unit(10), b = g.unit(10), c = g.unit(10);
        CHECK(h.integral(a, b) + h.integral(b, c) == h.integral(a, c));
        PiecewisePoly d = h.derivative();
        for (int k = 0; k < 4; ++k) {
            Rational x = g.unit(10);
            CHECK(d.integral(0, x) == h.value_left_of(x) - h.value_right_of(0));
        }
    }
}

TEST_CASE("property: slice_pair agrees with numerical quadrature") {
    Gen g(99);
    for (int i = 0; i < 20; ++i) {
        Rational c = g.positive_unit(6);
        PiecewisePoly h = random_concave(g);
        Measure m = neg_dh_measure(h);
        Piecewise2D K = dinf_slice(c);
        PiecewisePoly s = slice_pair(K, m);
        for (int k = 0; k < 3; ++k) {
            Rational x = g.unit(16);
            double dens = 0;
            if (m.has_density()) {
                const PiecewisePoly& rho = *m.density();
                const auto& bp = rho.breakpoints();
                for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
                    auto f = [&](double t) {
                        Rational tq(t);
                        return Rational(K(x, tq) * rho.pieces()[j](tq)).get_d();
                    };
                    dens += adaptive_simpson(f, bp[j].get_d(), bp[j + 1].get_d(), 1e-13, 40);
                }
            }
            double atoms = 0;
            for (const auto& a : m.atoms()) atoms += Rational(a.mass * K(x, a.loc)).get_d();
            CHECK(std::fabs(s(x).get_d() - (dens + atoms)) < 1e-9);
        }
    }
}

TEST_CASE("property: slice_pair of a positive measure is concave in x") {
    Gen g(5);
    for (int i = 0; i < 30; ++i) {
        Rational c = g.positive_unit(5);
        std::vector<Atom> atoms;
        for (int k = 0; k < 3; ++k) atoms.push_back({g.positive_unit(8) * 2, g.positive_unit(5)});
        Measure m(atoms, std::nullopt, {0, EndSign::Minus}, {2, EndSign::Plus});
        PiecewisePoly s = slice_pair(dinf_slice(c), m);
        for (int k = 1; k < 48; ++k) {
            Rational x = rat(k, 48), dx = rat(1, 48);
            CHECK(s(x - dx) + s(x + dx) <= 2 * s(x));
        }
    }
}
