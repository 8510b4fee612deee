#include "hk/compose.hpp"

#include <algorithm>
#include <set>

#include "hk/kernels.hpp"

namespace hk {

HFunction make_hfunction(const PiecewisePoly& h, std::optional<unsigned> ch) {
    if (h.lo() != 0 || h.left() != 0) throw UserError("an h-function starts at 0 with value 0");
    HFunction out;
    out.ch = ch;
    out.h = h.simplified();
    out.mu = neg_dh_measure(out.h);
    out.e_hk = out.h.derivative_side(0, Side::Plus);
    out.threshold = out.mu.support_sup();
    if (out.threshold <= 1) out.fsig = out.h.derivative_side(1, Side::Minus);
    return out;
}

Rational ehk(const HFunction& h) { return h.e_hk; }
std::optional<Rational> fsig(const HFunction& h) { return h.fsig; }
Rational threshold(const HFunction& h) { return h.threshold; }

HFunction h_pure_power(int n) {
    if (n < 1) throw UserError("pure power needs n >= 1");
    Rational end = rat(1, n);
    return make_hfunction(PiecewisePoly({0, end}, {Poly({0, Rational(n)})}, 0, 1));
}

HFunction segre_product_h(int l) {
    if (l < 1 || l > 60) throw UserError("segre product needs 1 <= l <= 60");
    Rational s = Rational(Integer(1) << l);
    return make_hfunction(PiecewisePoly({0, 1}, {Poly({0, s})}, 0, s));
}

Rational h_monomial_volume(const std::vector<std::vector<Rational>>& ideal_exps,
                           const std::vector<std::vector<Rational>>& gen_exps,
                           const std::vector<Rational>& t) {
    if (gen_exps.size() != t.size()) throw UserError("one parameter per generator");
    std::size_t n = 0;
    for (const auto& g : ideal_exps) n = std::max(n, g.size());
    for (const auto& g : gen_exps) n = std::max(n, g.size());
    if (n == 0) throw UserError("no variables");
    for (const auto& ti : t)
        if (ti <= 0) return 0;
    std::vector<std::vector<Rational>> corners;
    auto add = [&](const std::vector<Rational>& g, const Rational& s) {
        std::vector<Rational> c(n, 0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] < 0) throw UserError("exponents must be nonnegative");
            c[i] = g[i] * s;
        }
        corners.push_back(c);
    };
    for (const auto& g : ideal_exps) add(g, 1);
    for (std::size_t j = 0; j < gen_exps.size(); ++j) add(gen_exps[j], t[j]);

    std::vector<std::vector<Rational>> cuts(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::optional<Rational> bound;
        for (const auto& c : corners) {
            bool pure = true;
            for (std::size_t m = 0; m < n; ++m)
                if (m != k && c[m] != 0) pure = false;
            if (!pure) continue;
            if (c[k] == 0) return 0;
            if (!bound || c[k] < *bound) bound = c[k];
        }
        if (!bound)
            throw UserError("infinite volume: no pure power along axis " + std::to_string(k));
        std::set<Rational> s{0, *bound};
        for (const auto& c : corners)
            if (c[k] < *bound) s.insert(c[k]);
        cuts[k].assign(s.begin(), s.end());
    }
    Rational vol = 0;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        bool covered = false;
        for (const auto& c : corners) {
            bool above = true;
            for (std::size_t k = 0; k < n && above; ++k) above = cuts[k][idx[k]] >= c[k];
            if (above) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            Rational cell = 1;
            for (std::size_t k = 0; k < n; ++k) cell *= cuts[k][idx[k] + 1] - cuts[k][idx[k]];
            vol += cell;
        }
        std::size_t k = 0;
        while (k < n && ++idx[k] + 1 >= cuts[k].size()) idx[k++] = 0;
        if (k == n) break;
    }
    return vol;
}

HFunction compose_diag_inf(const HFunction& h, int d) {
    if (h.ch) throw UserError("compose_diag_inf needs a limit-characteristic h-function");
    if (d < 1) throw UserError("diagonal degree must be positive");
    PiecewisePoly g = slice_pair(dinf_slice(rat(1, d)), h.mu).scaled(d);
    return make_hfunction(PiecewisePoly(g.breakpoints(), g.pieces(), 0, g.right()));
}

LazyHEvaluator compose_diag_p(unsigned p, const Measure& mu, int d) {
    require_prime(p);
    if (d < 1) throw UserError("diagonal degree must be positive");
    struct Flat {
        Rational a, b, c;  // density c on [a, b]
    };
    std::vector<Flat> flats;
    if (mu.has_density()) {
        const PiecewisePoly& dens = *mu.density();
        const auto& bp = dens.breakpoints();
        for (std::size_t i = 0; i < dens.pieces().size(); ++i) {
            const Poly& q = dens.pieces()[i];
            if (q.is_zero()) continue;
            if (q.degree() > 0)
                throw UserError("characteristic-p composition supports atoms and piecewise-"
                                "constant densities only; use h_e_point for this tower");
            if (bp[i] < 0 || bp[i + 1] > 1)
                throw UserError("characteristic-p composition needs the measure inside [0, 1]");
            flats.push_back({bp[i], bp[i + 1], q.coeff(0)});
        }
    }
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms())
        if (a.mass != 0 && a.loc > 0 && mu.includes_atom_at(a.loc)) {
            if (a.loc > 1)
                throw UserError("characteristic-p composition needs the measure inside [0, 1]");
            atoms.push_back(a);
        }
    Rational inv = rat(1, d);
    LazyHEvaluator out;
    out.p = p;
    out.label = "diagonal composition, degree " + std::to_string(d);
    out.fn = [p, atoms, flats, inv, d](const Rational& r) -> Rational {
        if (r > 1) throw UserError("characteristic-p composition is evaluated on [0, 1]");
        Rational s = 0;
        for (const auto& a : atoms) s += a.mass * dp_eval(p, {a.loc, inv, r});
        for (const auto& f : flats)
            s += f.c * (dp_axis_integral(p, inv, r, f.b) - dp_axis_integral(p, inv, r, f.a));
        return s * d;
    };
    return out;
}

LazyHEvaluator compose_diag_p(unsigned p, const HFunction& h, int d) {
    return compose_diag_p(p, h.mu, d);
}

HFunction diagonal_inf(const std::vector<int>& degrees) {
    if (degrees.empty()) throw UserError("need at least one degree");
    HFunction h = h_pure_power(degrees[0]);
    for (std::size_t i = 1; i < degrees.size(); ++i) h = compose_diag_inf(h, degrees[i]);
    return h;
}

LazyHEvaluator diagonal_p(unsigned p, const std::vector<int>& degrees) {
    if (degrees.size() == 1) {
        int n = degrees[0];
        HFunction h = h_pure_power(n);
        return {p, "pure power", [h](const Rational& t) { return h(t); }};
    }
    if (degrees.size() != 2)
        throw UserError("characteristic-p diagonal towers beyond two variables are exposed "
                        "through the oracle only");
    return compose_diag_p(p, h_pure_power(degrees[0]), degrees[1]);
}

namespace {

void check_binomial(const Binomial& B) {
    if (B.a < 0 || B.b < 0) throw UserError("binomial exponents a, b must be nonnegative");
    if (B.u < 1 || B.v < 1 || B.c < 1) throw UserError("binomial needs u, v, c >= 1");
}

Rational binomial_head(const Binomial& B, const Rational& r) {
    return (B.a + B.b) * r - B.a * B.b * r * r;
}

}  // namespace

Rational binomial_reach(const Binomial& B) {
    check_binomial(B);
    if (B.a == 0 && B.b == 0) return (rat(1, B.u) + rat(1, B.v)) / B.c;
    return Rational(1, std::max(B.a, B.b));
}

HFunction h_binomial_inf(const Binomial& B) {
    Rational R = binomial_reach(B);
    PiecewisePoly line = dinf_line({rat(1, B.u), rat(1, B.v), 0},
                                   {rat(-B.a, B.u), rat(-B.b, B.v), Rational(B.c)}, 0, R);
    PiecewisePoly head = PiecewisePoly::from_poly(
        Poly({0, Rational(B.a + B.b), Rational(-B.a * B.b)}), 0, R);
    PiecewisePoly h = head + line.scaled(B.u * B.v);
    if (h.right() != 1) throw InvariantError("binomial h-function does not reach 1");
    return make_hfunction(PiecewisePoly(h.breakpoints(), h.pieces(), 0, 1));
}

LazyHEvaluator h_binomial_p(unsigned p, const Binomial& B) {
    require_prime(p);
    Rational R = binomial_reach(B);
    LazyHEvaluator out;
    out.p = p;
    out.label = "binomial";
    out.fn = [p, B, R](const Rational& r) -> Rational {
        if (r >= R) return 1;
        Vec3 x{(1 - r * B.a) / B.u, (1 - r * B.b) / B.v, r * B.c};
        return binomial_head(B, r) + B.u * B.v * dp_eval(p, x);
    };
    return out;
}

MPoly binomial_poly(const Binomial& B) {
    check_binomial(B);
    MPoly x = MPoly::variable(2, 0), y = MPoly::variable(2, 1);
    return x.pow(B.a) * y.pow(B.b) * (x.pow(B.u) + y.pow(B.v)).pow(B.c);
}

MPoly diagonal_poly(const std::vector<int>& degrees) {
    int n = static_cast<int>(degrees.size());
    MPoly f = MPoly::constant(n, 0);
    for (int i = 0; i < n; ++i) {
        if (degrees[i] < 1) throw UserError("degrees must be positive");
        f = f + MPoly::variable(n, i).pow(degrees[i]);
    }
    return f;
}

const std::vector<Binomial>& binomial_suite() {
    static const std::vector<Binomial> suite = {
        {0, 0, 1, 1, 1}, {1, 0, 1, 1, 1}, {1, 1, 1, 1, 1}, {0, 0, 1, 2, 1}, {0, 0, 2, 3, 1},
        {1, 0, 2, 3, 1}, {0, 2, 1, 1, 1}, {0, 1, 1, 2, 1}, {2, 1, 1, 1, 1}, {0, 0, 2, 2, 1},
        {0, 0, 1, 1, 2}, {1, 1, 1, 2, 1}, {0, 0, 1, 3, 1}, {1, 0, 1, 2, 2}, {0, 1, 2, 1, 1},
        {2, 0, 1, 1, 1}, {1, 2, 1, 1, 1}, {0, 0, 3, 3, 1}, {0, 0, 2, 1, 2}, {1, 1, 2, 2, 1}};
    return suite;
}

CompareReport oracle_compare(const std::function<Rational(const Rational&)>& engine,
                             const MPoly& f, unsigned p, int e,
                             const std::vector<Rational>& grid) {
    CompareReport rep;
    bool first = true;
    for (const auto& t : grid) {
        CompareRow row{t, engine(t), h_e_point(p, e, f, t)};
        Rational gap = row.oracle - row.engine;
        Rational ab = abs(gap);
        if (first || ab > rep.max_abs) rep.max_abs = ab;
        if (first || gap < rep.min_gap) rep.min_gap = gap;
        if (first || gap > rep.max_gap) rep.max_gap = gap;
        first = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::vector<Rational> grid_points(const Rational& step, const Rational& hi) {
    if (step <= 0) throw UserError("grid step must be positive");
    std::vector<Rational> out;
    for (Rational t = 0; t <= hi; t += step) out.push_back(t);
    return out;
}

Json to_json(const HFunction& h) {
    Json j;
    j["char"] = h.ch ? Json(*h.ch) : Json("inf");
    j["h"] = to_json(h.h);
    j["mu"] = to_json(h.mu);
    j["e_hk"] = to_string(h.e_hk);
    j["fsig"] = h.fsig ? Json(to_string(*h.fsig)) : Json(nullptr);
    j["threshold"] = to_string(h.threshold);
    return j;
}

}  // namespace hk
