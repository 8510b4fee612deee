#pragma once

#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hk/exactnum.hpp"
#include "hk/fforacle.hpp"
#include "hk/json_io.hpp"

namespace hk {

// An h-function in closed piecewise form. ch empty means the limit characteristic.
struct HFunction {
    std::optional<unsigned> ch;
    PiecewisePoly h;
    Measure mu;  // -dh'
    Rational e_hk;
    Rational threshold;
    std::optional<Rational> fsig;

    Rational operator()(const Rational& t) const { return t <= 0 ? Rational(0) : h(t); }
};

HFunction make_hfunction(const PiecewisePoly& h, std::optional<unsigned> ch = std::nullopt);

// Exact pointwise evaluator for a characteristic-p h-function.
struct LazyHEvaluator {
    unsigned p = 0;
    std::string label;
    std::function<Rational(const Rational&)> fn;

    Rational operator()(const Rational& t) const { return t <= 0 ? Rational(0) : fn(t); }
};

Rational ehk(const HFunction& h);
std::optional<Rational> fsig(const HFunction& h);
Rational threshold(const HFunction& h);

HFunction h_pure_power(int n);
HFunction segre_product_h(int l);

Rational h_monomial_volume(const std::vector<std::vector<Rational>>& ideal_exps,
                           const std::vector<std::vector<Rational>>& gen_exps,
                           const std::vector<Rational>& t);

// h of f + x^d, x a new variable.
HFunction compose_diag_inf(const HFunction& h, int d);
LazyHEvaluator compose_diag_p(unsigned p, const Measure& mu, int d);
LazyHEvaluator compose_diag_p(unsigned p, const HFunction& h, int d);

// h of x_1^{d_1} + ... + x_k^{d_k}.
HFunction diagonal_inf(const std::vector<int>& degrees);
LazyHEvaluator diagonal_p(unsigned p, const std::vector<int>& degrees);

struct Binomial {
    int a, b, u, v, c;
};
Rational binomial_reach(const Binomial& B);  // h = 1 from here on
HFunction h_binomial_inf(const Binomial& B);
LazyHEvaluator h_binomial_p(unsigned p, const Binomial& B);
MPoly binomial_poly(const Binomial& B);  // x^a y^b (x^u + y^v)^c
MPoly diagonal_poly(const std::vector<int>& degrees);
const std::vector<Binomial>& binomial_suite();

struct CompareRow {
    Rational t, engine, oracle;
};
struct CompareReport {
    std::vector<CompareRow> rows;
    Rational max_abs;  // max |oracle - engine|
    Rational min_gap, max_gap;  // range of oracle - engine
};
CompareReport oracle_compare(const std::function<Rational(const Rational&)>& engine,
                             const MPoly& f, unsigned p, int e,
                             const std::vector<Rational>& grid);
std::vector<Rational> grid_points(const Rational& step, const Rational& hi);

Json to_json(const HFunction& h);

}  // namespace hk
