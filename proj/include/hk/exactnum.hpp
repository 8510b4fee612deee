#pragma once

#include <gmpxx.h>

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hk/errors.hpp"

namespace hk {

using Rational = mpq_class;
using Integer = mpz_class;

Rational parse_rational(std::string_view s);
std::string to_string(const Rational& q);
Rational floor_q(const Rational& q);
Integer floor_z(const Rational& q);
Rational rat(long num, long den = 1);

// Dense univariate polynomial, ascending coefficients, no trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(const Rational& c);
    static Poly monomial(const Rational& c, int deg);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const;

    Rational operator()(const Rational& x) const;
    Poly derivative() const;
    Poly antiderivative() const;
    Poly compose_affine(const Rational& a, const Rational& b) const;  // p(a*x + b)

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& s);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Rational& s) { return a *= s; }
    friend Poly operator*(const Rational& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    std::string str(const char* var = "x") const;

private:
    void trim();
    std::vector<Rational> c_;
};

// Newton interpolation through distinct nodes.
Poly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

enum class Side { Minus, Plus };

class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<Rational> breakpoints, std::vector<Poly> pieces, Rational left,
                  Rational right);
    static PiecewisePoly from_poly(const Poly& p, const Rational& lo, const Rational& hi);

    const std::vector<Rational>& breakpoints() const { return bp_; }
    const std::vector<Poly>& pieces() const { return pieces_; }
    const Rational& left() const { return left_; }
    const Rational& right() const { return right_; }
    const Rational& lo() const { return bp_.front(); }
    const Rational& hi() const { return bp_.back(); }

    Rational value_left_of(const Rational& x) const;   // limit from below
    Rational value_right_of(const Rational& x) const;  // limit from above
    bool is_continuous() const;

    Rational operator()(const Rational& x) const;
    Rational integral(const Rational& a, const Rational& b) const;
    Rational derivative_side(const Rational& x, Side side) const;
    PiecewisePoly derivative() const;  // pointwise derivative, may jump
    PiecewisePoly refined(const std::vector<Rational>& extra) const;
    PiecewisePoly simplified() const;  // merges equal neighbours
    PiecewisePoly scaled(const Rational& s) const;
    int max_degree() const;

    friend PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b);
    friend bool operator==(const PiecewisePoly& a, const PiecewisePoly& b);  // as functions

private:
    size_t piece_index(const Rational& x) const;  // x strictly inside piece or on its left end
    std::vector<Rational> bp_;
    std::vector<Poly> pieces_;
    Rational left_, right_;
};

Rational pp_eval(const PiecewisePoly& f, const Rational& x);
Rational pp_integral(const PiecewisePoly& f, const Rational& a, const Rational& b);
Rational pp_derivative_side(const PiecewisePoly& f, const Rational& x, Side side);

// Builds a piecewise polynomial from an exact evaluator known to be polynomial of degree
// <= deg between consecutive cut points; each piece is checked at an extra node.
PiecewisePoly pp_from_evaluator(const std::function<Rational(const Rational&)>& f,
                                std::vector<Rational> cuts, int deg, const Rational& left,
                                const Rational& right);

enum class EndSign { Minus, None, Plus };

struct SignedEndpoint {
    Rational value;
    EndSign sign = EndSign::None;
};

struct Atom {
    Rational loc;
    Rational mass;
};

// Atoms plus a piecewise-polynomial density supported on [density.lo, density.hi].
class Measure {
public:
    Measure() = default;
    Measure(std::vector<Atom> atoms, std::optional<PiecewisePoly> density, SignedEndpoint lo,
            SignedEndpoint hi);

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::optional<PiecewisePoly>& density() const { return density_; }
    const SignedEndpoint& lo() const { return lo_; }
    const SignedEndpoint& hi() const { return hi_; }

    bool includes_atom_at(const Rational& t) const;
    bool has_density() const;
    Measure without_zero_atoms() const;
    Rational support_sup() const;  // 0 for the zero measure

private:
    std::vector<Atom> atoms_;
    std::optional<PiecewisePoly> density_;
    SignedEndpoint lo_, hi_;
};

Measure neg_dh_measure(const PiecewisePoly& h);
Rational measure_pair(const PiecewisePoly& f, const Measure& mu);
bool operator==(const Measure& a, const Measure& b);

// Bivariate polynomial, c[i][j] is the coefficient of x^i t^j.
struct Poly2 {
    std::vector<std::vector<Rational>> c;
    Rational operator()(const Rational& x, const Rational& t) const;
    int total_degree() const;
};

// a*x + b*t <= c with (a, b) a nonzero vector from {-1, 0, 1}^2.
struct HalfPlane {
    int a = 0, b = 0;
    Rational c;
    bool contains(const Rational& x, const Rational& t) const;
};

struct Region {
    std::string label;
    std::vector<HalfPlane> ineqs;
    Poly2 poly;
    bool contains(const Rational& x, const Rational& t) const;
};

// a*x + b*t = c, normalised so that (a, b) is one of (1,0), (0,1), (1,1), (1,-1).
struct Line {
    int a = 0, b = 0;
    Rational c;
};

// What slice_pair needs to know about a kernel K(x, t).
struct SliceKernel {
    Rational x_lo, x_hi;
    std::vector<Line> lines;
    int degree = 0;  // total degree bound on every cell of the line arrangement
    std::function<Rational(const Rational&, const Rational&)> eval;
};

class Piecewise2D {
public:
    Piecewise2D(Rational x_lo, Rational x_hi, Rational t_lo, std::optional<Rational> t_hi,
                std::vector<Region> regions);

    const std::vector<Region>& regions() const { return regions_; }
    const Rational& x_lo() const { return x_lo_; }
    const Rational& x_hi() const { return x_hi_; }
    const Rational& t_lo() const { return t_lo_; }
    const std::optional<Rational>& t_hi() const { return t_hi_; }

    Rational operator()(const Rational& x, const Rational& t) const;
    Rational eval_checked(const Rational& x, const Rational& t) const;  // all regions agree
    std::vector<Line> lines() const;
    int degree() const;
    SliceKernel kernel() const;
    Piecewise2D scaled(const Rational& s) const;

private:
    Rational x_lo_, x_hi_, t_lo_;
    std::optional<Rational> t_hi_;
    std::vector<Region> regions_;
};

PiecewisePoly slice_pair(const SliceKernel& K, const Measure& mu);
PiecewisePoly slice_pair(const Piecewise2D& K, const Measure& mu);

}  // namespace hk
