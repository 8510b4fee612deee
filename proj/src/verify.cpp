#include "hk/verify.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "hk/compose.hpp"
#include "hk/fermat.hpp"
#include "hk/fforacle.hpp"
#include "hk/kernels.hpp"

namespace hk {

namespace {

using Fn = std::function<Rational(const Rational&)>;

struct Piece {
    Rational a, b;
    Poly p;
};

// Assembles a printed formula; zero-length pieces are dropped.
PiecewisePoly printed(const std::vector<Piece>& ps, const Rational& right) {
    std::vector<Rational> bp;
    std::vector<Poly> pieces;
    for (const auto& x : ps) {
        if (x.a == x.b) continue;
        if (bp.empty()) bp.push_back(x.a);
        bp.push_back(x.b);
        pieces.push_back(x.p);
    }
    return PiecewisePoly(bp, pieces, 0, right);
}

Poly P(std::vector<Rational> c) { return Poly(std::move(c)); }

std::string s(const Rational& q) { return to_string(q); }

// Concave on its support: p'' <= 0 on every piece (cubic pieces, so endpoints decide)
// and no upward kinks.
bool concave(const PiecewisePoly& h) {
    const auto& bp = h.breakpoints();
    for (std::size_t i = 0; i < h.pieces().size(); ++i) {
        Poly d2 = h.pieces()[i].derivative().derivative();
        if (d2.degree() > 1) throw InvariantError("concavity check handles cubic pieces only");
        if (d2(bp[i]) > 0 || d2(bp[i + 1]) > 0) return false;
        if (i > 0 && h.derivative_side(bp[i], Side::Plus) > h.derivative_side(bp[i], Side::Minus))
            return false;
    }
    return true;
}

std::string first_diff(const PiecewisePoly& engine, const PiecewisePoly& claim,
                        const std::vector<Rational>& at) {
    for (const auto& t : at)
        if (engine(t) != claim(t))
            return "at " + s(t) + " engine " + s(engine(t)) + ", printed " + s(claim(t));
    return "pieces differ off the sample points";
}

// Tiny deterministic generator for property sweeps.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    Rational unit_rational(long max_den) {
        long d = uniform(1, max_den);
        return rat(uniform(0, d), d);
    }

private:
    std::mt19937_64 rng_;
};

void add(CriterionResult& r, std::string label, bool pass, std::string detail) {
    r.checks.push_back({std::move(label), pass, std::move(detail)});
}

// ---------------------------------------------------------------------------

void c1_kernel_vs_oracle(CriterionResult& r) {
    for (unsigned p : {2u, 3u}) {
        long q = p * p, points = 0, bad = 0;
        std::string first;
        MPoly sum = parse_mpoly("x0+x1");
        for (long a = 0; a <= q; ++a)
            for (long b = 0; b <= q; ++b)
                for (long c = 0; c <= q; ++c) {
                    ++points;
                    Rational lhs = Rational(q * q) * dp_eval(p, {rat(a, q), rat(b, q), rat(c, q)});
                    long rhs = a == 0 || b == 0 ? 0
                               : quotient_length(StaircaseQuotient(p, {int(a), int(b)}), sum, c);
                    if (lhs != rhs && bad++ == 0)
                        first = "(" + std::to_string(a) + "," + std::to_string(b) + "," +
                                std::to_string(c) + "): " + s(lhs) + " vs " + std::to_string(rhs);
                }
        add(r, "p=" + std::to_string(p) + ", q=" + std::to_string(q), bad == 0,
            std::to_string(points) + " points" + (bad ? ", " + std::to_string(bad) +
                                                            " mismatches, first " + first
                                                      : ""));
    }
}

void c2_ifs_crosscheck(CriterionResult& r) {
    for (unsigned p : {2u, 3u}) {
        Gen g(0x5eed0000 + p);
        int bad = 0;
        std::string first;
        for (int i = 0; i < 500; ++i) {
            Vec3 x{g.unit_rational(40), g.unit_rational(40), g.unit_rational(40)};
            Rational ifs = p == 2 ? dp_char2(x) : dp_char3(x);
            Rational han = dp_eval(p, x);
            if (ifs != han && bad++ == 0)
                first = s(x[0]) + "," + s(x[1]) + "," + s(x[2]) + ": " + s(ifs) + " vs " + s(han);
        }
        add(r, std::string(p == 2 ? "dp_char2" : "dp_char3") + " vs dp_eval", bad == 0,
            "500 random points, denominators <= 40" + (bad ? ", first mismatch " + first : ""));
    }
}

void c3_limit_bound(CriterionResult& r) {
    for (unsigned p : {3u, 5u, 7u}) {
        Rational bound = rat(1, long(p) * p), lo = 0, hi = 0;
        int points = 0, bad = 0;
        for (int a = 0; a <= 12; ++a)
            for (int b = 0; b <= 12; ++b)
                for (int c = 0; c <= 12; ++c) {
                    Vec3 x{rat(a, 12), rat(b, 12), rat(c, 12)};
                    if (!in_T0(x)) continue;
                    ++points;
                    Rational g = dp_eval(p, x) - dinf_eval(x);
                    if (points == 1 || g < lo) lo = g;
                    if (points == 1 || g > hi) hi = g;
                    if (g < 0 || g > bound) ++bad;
                }
        add(r, "p=" + std::to_string(p) + ", 0 <= D_p - D_inf <= " + s(bound), bad == 0,
            std::to_string(points) + " grid points in T0, observed range [" + s(lo) + ", " +
                s(hi) + "]");
    }
}

void c4_gessel_monsky(CriterionResult& r) {
    auto z = zigzag(8);
    Integer fact = 1;
    int bad = 0;
    std::ostringstream vals;
    for (int n = 0; n <= 8; ++n) {
        if (n > 0) fact *= n;
        Rational want = 1 + Rational(z[n], fact);
        want.canonicalize();
        Rational got = ehk(fermat_phi(2, n));
        if (got != want) ++bad;
        vals << (n ? ", " : "") << s(got);
    }
    add(r, "e_HK(phi_n) = 1 + zigzag(n)/n!, n = 0..8", bad == 0, "e_HK: " + vals.str());
}

void c5_degree_three(CriterionResult& r) {
    SeriesPair sp = series_d3(6);
    int bad_e = 0, bad_s = 0, neg = 0;
    std::ostringstream ce, cs, fs;
    for (int n = 0; n <= 6; ++n) {
        HFunction h = fermat_phi(3, n);
        if (h.e_hk - 1 != sp.ehk[n]) ++bad_e;
        Rational f = h.fsig ? *h.fsig : Rational(-1);
        if (!h.fsig || f != sp.fsig[n]) ++bad_s;
        if (!h.fsig || f != -sp.fsig[n]) ++neg;
        ce << (n ? ", " : "") << s(sp.ehk[n]);
        cs << (n ? ", " : "") << s(sp.fsig[n]);
        fs << (n ? ", " : "") << (h.fsig ? s(*h.fsig) : "null");
    }
    add(r, "e_HK(phi_n) - 1 = c_n, n = 0..6", bad_e == 0, "c_n: " + ce.str());
    add(r, "fsig(phi_n) = c'_n, n = 0..6", bad_s == 0,
        "c'_n from the printed series: " + cs.str() + "; tower fsig: " + fs.str() +
            (neg == 0 ? "; fsig = -c'_n holds for every n, so the printed series is "
                        "-d/dx Phi(alpha, 1-) with the opposite sign; the tower values "
                        "include the known limit 1/8 for the cubic in three variables"
                      : ""));
}

void c6_char2_cubic(CriterionResult& r) {
    Char2CubicReport rep = char2_cubic(8);
    bool ok = true;
    std::ostringstream v;
    for (int i = 2; i <= 4; ++i) {
        Rational want = rat(9, 16) / Rational(Integer(1) << (i - 2));
        if (rep.h_dyadic[i] != want) ok = false;
        v << (i > 2 ? ", " : "") << "h(1/" << (1 << i) << ") = " << s(rep.h_dyadic[i]);
    }
    add(r, "h(1/2^i) = (9/16)/2^(i-2), i = 2..4", ok, v.str());

    bool series_ok = true;
    for (int i = 0; i <= 8; ++i) {
        Rational want = i == 0 || i == 1 ? Rational(1) : rat(9, 16) / Rational(Integer(1) << (i - 2));
        if (rep.h_dyadic[i] != want) series_ok = false;
    }
    add(r, "series 1 + a + (9/16)a^2/(1 - a/2) to order 8", series_ok,
        "h(1/256) = " + s(rep.h_dyadic[8]));
    add(r, "e_hk = 9/4", rep.e_hk == rat(9, 4), "e_hk = " + s(rep.e_hk));

    MPoly f = parse_mpoly("x^3+y^3+z^3");
    int checks = 0, bad = 0;
    for (int i = 0; i <= 4; ++i)
        for (int e = std::max(i, 1); e <= 4; ++e) {
            ++checks;
            Rational t = rat(1, 1L << i);
            if (h_e_point(2, e, f, t) != rep.h(t)) ++bad;
        }
    add(r, "oracle over F_2, q <= 16", bad == 0,
        std::to_string(checks) + " (t, q) pairs with t = 1/2^i, q >= 2^i");
}

void c7_worked_examples(CriterionResult& r) {
    for (int n : {2, 3, 5}) {
        Rational N = n;
        HFunction eng = diagonal_inf({n, 2, 2});
        PiecewisePoly claim = printed(
            {{0, rat(1, n), P({0, (2 * N - 1) / N, 0, -N / 3})},
             {rat(1, n), rat(n - 1, n), P({-1 / (3 * N * N), 2, -1})},
             {rat(n - 1, n), 1, P({1 - (N * N + 3) / (3 * N), (N * N + 1) / N, -N, N / 3})}},
            1);
        add(r, "A_" + std::to_string(n - 1) + ": h of x^2+y^2+z^" + std::to_string(n),
            eng.h == claim, eng.h == claim ? "three pieces equal" : first_diff(eng.h, claim, grid_points(rat(1, 24), 1)));
        HFunction inner = diagonal_inf({n, 2});
        PiecewisePoly d = printed(
            {{0, rat(1, 2) - rat(1, n), P({0, 1 / N})},
             {rat(1, 2) - rat(1, n), rat(1, 2) + rat(1, n),
              P({1 / (4 * N) - 1 / (4 * N * N) - rat(1, 16), 1 / (2 * N) + rat(1, 4), rat(-1, 4)})},
             {rat(1, 2) + rat(1, n), 1, P({1 / (2 * N)})}},
            1 / (2 * N));
        PiecewisePoly companion = d.scaled(2 * N);
        add(r, "A_" + std::to_string(n - 1) + " companion: h of y^2+z^" + std::to_string(n) +
                   " = 2n D_inf(1/2, 1/n, t)",
            inner.h == companion, inner.h == companion ? "pieces equal" : first_diff(inner.h, companion, grid_points(rat(1, 24), 1)));
    }

    // E7 = x^2 + y^3 + y z^3
    Binomial b7{1, 0, 2, 3, 1};
    HFunction in7 = h_binomial_inf(b7);
    PiecewisePoly in_claim = printed({{0, rat(1, 9), P({0, rat(4, 3)})},
                                      {rat(1, 9), rat(5, 9), P({rat(-1, 144), rat(35, 24), rat(-9, 16)})},
                                      {rat(5, 9), 1, P({rat(1, 6), rat(5, 6)})}},
                                     1);
    CompareReport orc = oracle_compare(h_binomial_p(5, b7).fn, binomial_poly(b7), 5, 2,
                                       grid_points(rat(1, 25), 1));
    int printed_off = 0;
    for (const auto& row : orc.rows)
        if (in_claim(row.t) != row.oracle) ++printed_off;
    bool in_eq = in7.h == in_claim;
    PiecewisePoly in_fixed = in_claim.scaled(6) + PiecewisePoly::from_poly(P({0, -5}), 0, 1);
    add(r, "E7 inner factor pieces (y^3 + y z^3)", in_eq,
        in_eq ? "pieces equal"
              : "engine " + in7.h.pieces()[1].str("r") + " on [1/9, 5/9]; oracle at p=5, q=25 " +
                    "agrees with the engine at all " + std::to_string(orc.rows.size()) +
                    " points (max |gap| " + s(orc.max_abs) + ") and with the printed pieces at " +
                    std::to_string(orc.rows.size() - printed_off) +
                    "; engine = 6*printed - 5r exactly: " +
                    (in_fixed == in7.h ? "yes" : "no") +
                    ", i.e. the printed factor is r + D_inf(...) without the uv = 6 weight");

    HFunction e7 = compose_diag_inf(in7, 2);
    std::vector<Piece> bracket = {
        {0, rat(1, 18), P({0, rat(95, 288), 0, rat(-3, 8)})},
        {rat(1, 18), rat(7, 18), P({rat(-1, 31104), rat(54 * 191, 31104), rat(-54 * 18, 31104), rat(-54 * 108, 31104)})},
        {rat(7, 18), rat(11, 18), P({rat(-43, 3888), rat(5, 12), rat(-3, 12)})},
        {rat(11, 18), rat(17, 18), P({rat(-1675, 31104), rat(54 * 361, 31104), rat(-54 * 18 * 19, 31104), rat(54 * 108, 31104)})},
        {rat(17, 18), 1, P({rat(-61, 288), rat(325, 288), rat(-324, 288), rat(108, 288)})}};
    PiecewisePoly br = printed(bracket, bracket.back().p(1));
    PiecewisePoly claim7 = br + PiecewisePoly::from_poly(P({0, rat(5, 6)}), 0, 1);
    claim7 = PiecewisePoly(claim7.breakpoints(), claim7.pieces(), 0, claim7(1));
    bool e7_eq = e7.h == claim7;
    PiecewisePoly six = br.scaled(6);
    six = PiecewisePoly(six.breakpoints(), six.pieces(), 0, 1);
    add(r, "E7 five-piece formula (5r/6 + printed pieces)", e7_eq,
        e7_eq ? "pieces equal"
              : first_diff(e7.h, claim7, grid_points(rat(1, 18), 1)) + "; engine equals 6 times the printed five pieces without 5r/6: " +
                    (six == e7.h ? "yes, same breakpoints 1/18, 7/18, 11/18, 17/18" : "no") +
                    "; the printed form inherits the inner-factor weight error");
    add(r, "E7 engine invariants", e7.e_hk == rat(95, 48) && e7.fsig && *e7.fsig == rat(1, 48),
        "e_HK = " + s(e7.e_hk) + " = 2 - 1/48, fsig = " + (e7.fsig ? s(*e7.fsig) : "null") +
            " = 1/48, the binary octahedral group order");

    // D_{n+1} = x^2 + y z^2 + z^n
    for (int n = 3; n <= 7; ++n) {
        std::string tag = "D_" + std::to_string(n + 1);
        HFunction inner = h_binomial_inf({0, 2, 1, n - 2, 1});
        HFunction lim = compose_diag_inf(inner, 2);
        bool shape = lim.h.value_right_of(0) == 0 && lim.h(1) == 1 && lim.h.is_continuous() &&
                     lim.h.left() == lim.h.value_right_of(lim.h.lo()) && concave(lim.h);
        add(r, tag + " limit h: h(0)=0, h(1)=1, continuous, concave", shape,
            "pieces " + lim.h.pieces().front().str("r") + " | " + lim.h.pieces().back().str("r"));
        LazyHEvaluator ch3 = compose_diag_p(3, inner, 2);
        MPoly f = parse_mpoly("x^2+y*z^2+z^" + std::to_string(n));
        auto grid = grid_points(rat(1, 9), 1);
        CompareReport p3 = oracle_compare(ch3.fn, f, 3, 2, grid);
        CompareReport pl = oracle_compare([&](const Rational& t) { return lim(t); }, f, 3, 2, grid);
        add(r, tag + " engine vs h_e_point, p=3, q=9", p3.max_abs == 0,
            "characteristic-3 composition, max |gap| " + s(p3.max_abs) +
                " over 10 points; limit engine sits below the oracle by " + s(pl.min_gap) +
                ".." + s(pl.max_gap));
    }
    PiecewisePoly dclaim =
        printed({{0, rat(1, 2), P({rat(-1, 12), rat(54, 12), rat(-18, 12), rat(-8, 12)})},
                 {rat(1, 2), 1, P({rat(-1, 6), rat(18, 6), rat(-15, 6), rat(4, 6)})}},
                1);
    HFunction d4 = compose_diag_inf(h_binomial_inf({0, 2, 1, 1, 1}), 2);
    Rational d0 = dclaim.value_right_of(0);
    bool flagged = d0 != 0 && !dclaim.is_continuous();
    add(r, "printed D_{n+1} polynomial reported as a discrepancy", flagged,
        "printed h(0+) = " + s(d0) + ", jump at 1/2 from " + s(dclaim.value_left_of(rat(1, 2))) +
            " to " + s(dclaim.value_right_of(rat(1, 2))) + "; printed piece on [1/2, 1] " +
            (dclaim.pieces()[1] == d4.h.pieces().back() ? "matches" : "differs from") +
            " the engine");
}

void c8_watanabe_yoshida(CriterionResult& r) {
    auto grid = grid_points(rat(1, 9), 1);
    for (int n = 0; n <= 3; ++n) {
        MPoly f = diagonal_poly(std::vector<int>(n + 1, 2));
        HFunction lim = fermat_phi(2, n);
        CompareReport c = oracle_compare([&](const Rational& t) { return lim(t); }, f, 3, 2, grid);
        add(r, "h_3 >= h_inf, " + std::to_string(n + 1) + " variables", c.min_gap >= 0,
            "oracle - limit ranges over [" + s(c.min_gap) + ", " + s(c.max_gap) + "]");
    }
    // e_HK of the quadric in nv variables: phi'(0) = 2 phi_{nv-2}(1/2) = 2 int phi_{nv-3}.
    for (int nv = 3; nv <= 5; ++nv) {
        HFunction top = fermat_phi(2, nv - 1), mid = fermat_phi(2, nv - 2), low = fermat_phi(2, nv - 3);
        bool limit_ok = top.e_hk == 2 * mid(rat(1, 2)) && top.e_hk == 2 * low.h.integral(0, 1);
        add(r, "limit reductions, " + std::to_string(nv) + " variables", limit_ok,
            "e_HK = " + s(top.e_hk) + ", 2 phi(1/2) = " + s(2 * mid(rat(1, 2))) +
                ", 2 int phi = " + s(2 * low.h.integral(0, 1)));
    }
    // Char 3: lower-dimensional factors are characteristic free (1, 2 variables) or
    // computed by the characteristic-3 composition engine (3 variables).
    LazyHEvaluator phi2_3 = compose_diag_p(3, fermat_phi(2, 1), 2);
    CompareReport v = oracle_compare(phi2_3.fn, diagonal_poly({2, 2, 2}), 3, 2, grid);
    Rational e3 = 2 * compose_diag_p(3, fermat_phi(2, 0), 2)(rat(1, 2));
    Rational e3b = 2 * fermat_phi(2, 0).h.integral(0, 1);
    add(r, "p=3 equality, 3 variables", e3 == e3b && e3 == fermat_phi(2, 2).e_hk,
        "2 phi_1,3(1/2) = " + s(e3) + ", 2 int phi_0 = " + s(e3b) + ", limit " +
            s(fermat_phi(2, 2).e_hk));
    Rational e4 = 2 * phi2_3(rat(1, 2));
    Rational e4b = 2 * fermat_phi(2, 1).h.integral(0, 1);
    add(r, "p=3 equality, 4 variables", e4 == e4b && e4 == fermat_phi(2, 3).e_hk && v.max_abs == 0,
        "2 phi_2,3(1/2) = " + s(e4) + ", 2 int phi_1 = " + s(e4b) + ", limit " +
            s(fermat_phi(2, 3).e_hk) + "; phi_2,3 engine vs oracle at q=9: max |gap| " +
            s(v.max_abs));
    // phi_2,3 is concave with phi(0) = 0, so its trapezoid sum from exact oracle values is a
    // lower bound for the integral.
    std::vector<Rational> vals;
    for (const auto& row : v.rows) vals.push_back(row.oracle);
    bool conc = true;
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        if (vals[i - 1] + vals[i + 1] > 2 * vals[i]) conc = false;
    Rational trap = 0;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) trap += (vals[i] + vals[i + 1]) / 18;
    Rational lim5 = fermat_phi(2, 4).e_hk;
    add(r, "p=3 strict gap, 5 variables", conc && 2 * trap > lim5,
        "e_HK,3 = 2 int phi_2,3 >= 2 * trapezoid(q=9 oracle) = " + s(2 * trap) + " > " + s(lim5) +
            " = limit, margin " + s(2 * trap - lim5) + (conc ? "" : "; oracle values not concave"));
}

void c9_binomials(CriterionResult& r) {
    for (unsigned p : {2u, 3u}) {
        long q = p * p;
        int bad = 0, points = 0;
        std::string first;
        for (const auto& B : binomial_suite()) {
            LazyHEvaluator ev = h_binomial_p(p, B);
            CompareReport c = oracle_compare(ev.fn, binomial_poly(B), p, 2, grid_points(rat(1, q), 1));
            points += int(c.rows.size());
            if (c.max_abs != 0 && bad++ == 0) first = binomial_poly(B).str();
        }
        add(r, "p=" + std::to_string(p) + ", q=" + std::to_string(q) + ", 20 binomials", bad == 0,
            std::to_string(points) + " points" + (bad ? ", first failing " + first : ""));
    }
}

void c10_measures(CriterionResult& r) {
    std::vector<std::pair<std::string, HFunction>> hs;
    for (int n = 1; n <= 12; ++n) hs.push_back({"pure power", h_pure_power(n)});
    for (int l = 1; l <= 6; ++l) hs.push_back({"segre", segre_product_h(l)});
    for (const auto& B : binomial_suite()) hs.push_back({"binomial", h_binomial_inf(B)});
    for (int n = 0; n <= 8; ++n) hs.push_back({"fermat d=2", fermat_phi(2, n)});
    for (int n = 0; n <= 6; ++n) hs.push_back({"fermat d=3", fermat_phi(3, n)});
    Gen g(0xd1a6);
    while (hs.size() < 120) {
        std::vector<int> degs(g.uniform(2, 3));
        for (auto& d : degs) d = int(g.uniform(1, 5));
        hs.push_back({"diagonal", diagonal_inf(degs)});
        Binomial B{int(g.uniform(0, 2)), int(g.uniform(0, 2)), int(g.uniform(1, 3)),
                   int(g.uniform(1, 3)), int(g.uniform(1, 2))};
        HFunction hb = h_binomial_inf(B);
        hs.push_back({"binomial+diag", compose_diag_inf(hb, int(g.uniform(1, 3)))});
    }
    int bad = 0;
    std::string first;
    for (const auto& [kind, h] : hs) {
        Rational lo = -1, hi = h.h.hi() + 1;
        Rational mass = measure_pair(PiecewisePoly::from_poly(P({1}), lo, hi), h.mu);
        Rational moment = measure_pair(PiecewisePoly::from_poly(P({0, 1}), lo, hi), h.mu);
        if ((mass != 0 || moment != h.h.right()) && bad++ == 0)
            first = kind + ": mass " + s(mass) + ", moment " + s(moment) + ", lim h " + s(h.h.right());
    }
    add(r, "mass 0 and first moment = lim h", bad == 0,
        std::to_string(hs.size()) + " h-functions" + (bad ? ", first failure " + first : ""));
}

void c11_multilinear(CriterionResult& r) {
    for (unsigned p : {2u, 3u}) {
        for (int e = 1;; ++e) {
            long q = 1;
            for (int i = 0; i < e; ++i) q *= p;
            if (q > 9) break;
            int checks = 0, bad = 0;
            for (int a = 1; a <= 3; ++a)
                for (int b = 1; b <= 3; ++b) {
                    std::vector<MPoly> fs{parse_mpoly("x^" + std::to_string(a)),
                                          parse_mpoly("x^" + std::to_string(b))};
                    for (long rr = 0; rr <= 2 * q; ++rr) {
                        ++checks;
                        if (!discrete_multilinear_check(p, e, fs, rr)) ++bad;
                    }
                }
            add(r, "p=" + std::to_string(p) + ", q=" + std::to_string(q), bad == 0,
                std::to_string(checks) + " (x^a, y^b, r) cases, a, b <= 3, r <= 2q");
        }
    }
}

struct CriterionEntry {
    const char* title;
    const char* tolerance;
    void (*fn)(CriterionResult&);
    double budget_s = 0;  // 0: no runtime bound
};

const std::vector<CriterionEntry>& criteria_table() {
    static const std::vector<CriterionEntry> v = {
        {"kernel vs oracle", "exact", c1_kernel_vs_oracle, 120},
        {"char-2/char-3 IFS cross-check", "exact", c2_ifs_crosscheck},
        {"limit bound", "exact inequalities", c3_limit_bound},
        {"Gessel-Monsky", "exact", c4_gessel_monsky, 60},
        {"degree-3 generating functions", "exact", c5_degree_three},
        {"char-2 cubic", "exact", c6_char2_cubic, 300},
        {"worked examples", "exact", c7_worked_examples},
        {"Watanabe-Yoshida properties", "exact inequalities", c8_watanabe_yoshida},
        {"binomial closed form vs oracle", "exact", c9_binomials},
        {"measure invariants", "exact", c10_measures},
        {"discrete multilinear formula", "exact", c11_multilinear}};
    return v;
}

}  // namespace

bool CriterionResult::pass() const {
    if (checks.empty()) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

int criterion_count() { return int(criteria_table().size()); }

CriterionResult run_criterion(int id) {
    if (id < 1 || id > criterion_count())
        throw UserError("criterion id must be in 1.." + std::to_string(criterion_count()));
    const CriterionEntry& sp = criteria_table()[id - 1];
    CriterionResult r;
    r.id = id;
    r.title = sp.title;
    r.tolerance = sp.tolerance;
    auto t0 = std::chrono::steady_clock::now();
    try {
        sp.fn(r);
    } catch (const std::exception& e) {
        add(r, "evaluation", false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sp.budget_s > 0) {
        std::ostringstream b;
        b << "runtime budget " << sp.budget_s << " s";
        add(r, "runtime", r.seconds <= sp.budget_s, b.str());
    }
    return r;
}

std::vector<CriterionResult> run_all_criteria() {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= criterion_count(); ++i) out.push_back(run_criterion(i));
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream o;
    for (const auto& c : r.checks)
        o << "    " << (c.pass ? "ok  " : "FAIL") << "  " << r.id << ". " << c.label << ": "
          << c.detail << "\n";
    o << (r.pass() ? "PASS" : "FAIL") << "  criterion " << r.id << " (" << r.title
      << "), tolerance: " << r.tolerance << "\n";
    return o.str();
}

Json to_json(const CriterionResult& r) {
    Json j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass();
    Json cs = Json::array();
    for (const auto& c : r.checks) cs.push_back({{"label", c.label}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = cs;
    return j;
}

}  // namespace hk
