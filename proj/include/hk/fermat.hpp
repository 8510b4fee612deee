#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hk/compose.hpp"
#include "hk/exactnum.hpp"

namespace hk {

// a + b*sqrt(3)
struct QSqrt3 {
    Rational a, b;

    QSqrt3() = default;
    QSqrt3(Rational a_, Rational b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}
    static QSqrt3 sqrt3() { return {0, 1}; }

    bool is_zero() const { return a == 0 && b == 0; }
    QSqrt3 inverse() const;
    friend QSqrt3 operator+(const QSqrt3& x, const QSqrt3& y) { return {x.a + y.a, x.b + y.b}; }
    friend QSqrt3 operator-(const QSqrt3& x, const QSqrt3& y) { return {x.a - y.a, x.b - y.b}; }
    friend QSqrt3 operator-(const QSqrt3& x) { return {-x.a, -x.b}; }
    friend QSqrt3 operator*(const QSqrt3& x, const QSqrt3& y) {
        return {x.a * y.a + 3 * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    friend QSqrt3 operator/(const QSqrt3& x, const QSqrt3& y) { return x * y.inverse(); }
    friend bool operator==(const QSqrt3& x, const QSqrt3& y) { return x.a == y.a && x.b == y.b; }
    std::string str() const;
};

// Truncated power series in alpha over Q(sqrt3), coefficients 0..order.
class AlgebraicSeries {
public:
    explicit AlgebraicSeries(int order = 0);
    static AlgebraicSeries constant(int order, const QSqrt3& c);
    static AlgebraicSeries alpha(int order);
    static AlgebraicSeries geometric(int order);  // 1/(1 - alpha)
    static AlgebraicSeries sin(int order);
    static AlgebraicSeries cos(int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const QSqrt3& operator[](int i) const { return c_[i]; }
    QSqrt3& operator[](int i) { return c_[i]; }

    AlgebraicSeries scaled_arg(const QSqrt3& c) const;  // f(c * alpha)
    AlgebraicSeries div_alpha() const;                 // requires a zero constant term
    AlgebraicSeries derivative() const;
    std::vector<Rational> rational_parts() const;      // requires zero sqrt3 parts
    bool is_zero() const;

    friend AlgebraicSeries operator+(const AlgebraicSeries& x, const AlgebraicSeries& y);
    friend AlgebraicSeries operator-(const AlgebraicSeries& x, const AlgebraicSeries& y);
    friend AlgebraicSeries operator*(const AlgebraicSeries& x, const AlgebraicSeries& y);
    friend AlgebraicSeries operator*(const QSqrt3& s, const AlgebraicSeries& x);
    friend AlgebraicSeries operator/(const AlgebraicSeries& x, const AlgebraicSeries& y);

private:
    std::vector<QSqrt3> c_;
};

// phi_n = h of x_0^d + ... + x_n^d in the limit characteristic.
class FermatTower {
public:
    explicit FermatTower(int d);
    int degree() const { return d_; }
    const HFunction& level(int n);  // extends the tower as needed
    int size() const { return static_cast<int>(phi_.size()); }

private:
    int d_;
    std::vector<HFunction> phi_;
};

HFunction fermat_phi(int d, int n);

std::vector<Integer> zigzag(int N);  // entries 0..N

struct SeriesPair {
    std::vector<Rational> ehk, fsig;  // coefficients 0..N
};
SeriesPair series_d2(int N);
SeriesPair series_d3(int N);  // ehk holds c_n = e_HK - 1, fsig holds c'_n

// Coefficients 0..N of Phi(alpha, x) = sum phi_n(x) alpha^n.
std::vector<Rational> closed_phi_d2(int N, const Rational& x);
std::vector<Rational> closed_phi_d3(int N, const Rational& x);

struct PhiConsistencyReport {
    bool ok = true;
    int checks = 0;
    std::string first_mismatch;
};
PhiConsistencyReport verify_phi_consistency(int d, int N, const std::vector<Rational>& samples);
std::vector<Rational> default_phi_samples();

// Characteristic 2: v1 = D_2(1/3, 1/3, .), v2 = D_2(2/3, 2/3, .), h_{x^3+y^3} = 9 v1.
Rational char2_v(int which, const Rational& t);
// Lw1, Lw2 with h_{x^3+y^3+z^3} = 27 Lw1.
Rational char2_lw(int which, const Rational& x);

struct Char2TwoCubes {
    std::function<Rational(const Rational&)> v1, h;
};
Char2TwoCubes char2_sum_two_cubes();

struct Char2CubicReport {
    std::function<Rational(const Rational&)> h;
    std::vector<Rational> h_dyadic;  // h(1/2^i), i = 0..order
    Rational e_hk;
};
Char2CubicReport char2_cubic(int order = 8);

}  // namespace hk
