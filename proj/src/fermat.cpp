#include "hk/fermat.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "hk/orbit.hpp"

namespace hk {

QSqrt3 QSqrt3::inverse() const {
    Rational n = a * a - 3 * b * b;
    if (n == 0) throw InvariantError("division by zero in Q(sqrt3)");
    return {a / n, -b / n};
}

std::string QSqrt3::str() const {
    if (b == 0) return to_string(a);
    return to_string(a) + (b < 0 ? " - " : " + ") + to_string(abs(b)) + "*sqrt3";
}

AlgebraicSeries::AlgebraicSeries(int order) {
    if (order < 0) throw UserError("series order must be nonnegative");
    c_.assign(order + 1, QSqrt3());
}

AlgebraicSeries AlgebraicSeries::constant(int order, const QSqrt3& c) {
    AlgebraicSeries s(order);
    s.c_[0] = c;
    return s;
}

AlgebraicSeries AlgebraicSeries::alpha(int order) {
    AlgebraicSeries s(order);
    if (order >= 1) s.c_[1] = QSqrt3(1);
    return s;
}

AlgebraicSeries AlgebraicSeries::geometric(int order) {
    AlgebraicSeries s(order);
    for (auto& c : s.c_) c = QSqrt3(1);
    return s;
}

namespace {

std::vector<Rational> inverse_factorials(int order) {
    std::vector<Rational> f(order + 1);
    Integer k = 1;
    for (int i = 0; i <= order; ++i) {
        if (i > 0) k *= i;
        f[i] = Rational(1) / Rational(k);
    }
    return f;
}

}  // namespace

AlgebraicSeries AlgebraicSeries::sin(int order) {
    AlgebraicSeries s(order);
    auto f = inverse_factorials(order);
    for (int i = 1; i <= order; i += 2) s.c_[i] = QSqrt3(((i / 2) % 2 ? -1 : 1) * f[i]);
    return s;
}

AlgebraicSeries AlgebraicSeries::cos(int order) {
    AlgebraicSeries s(order);
    auto f = inverse_factorials(order);
    for (int i = 0; i <= order; i += 2) s.c_[i] = QSqrt3(((i / 2) % 2 ? -1 : 1) * f[i]);
    return s;
}

AlgebraicSeries AlgebraicSeries::scaled_arg(const QSqrt3& c) const {
    AlgebraicSeries s(order());
    QSqrt3 pw(1);
    for (int i = 0; i <= order(); ++i) {
        s.c_[i] = c_[i] * pw;
        pw = pw * c;
    }
    return s;
}

AlgebraicSeries AlgebraicSeries::div_alpha() const {
    if (!c_[0].is_zero())
        throw InvariantError("pole at alpha = 0 does not cancel: residue " + c_[0].str());
    AlgebraicSeries s(order() - 1);
    for (int i = 1; i <= order(); ++i) s.c_[i - 1] = c_[i];
    return s;
}

AlgebraicSeries AlgebraicSeries::derivative() const {
    AlgebraicSeries s(std::max(order() - 1, 0));
    for (int i = 1; i <= order(); ++i) s.c_[i - 1] = QSqrt3(i) * c_[i];
    return s;
}

std::vector<Rational> AlgebraicSeries::rational_parts() const {
    std::vector<Rational> out;
    for (int i = 0; i <= order(); ++i) {
        if (c_[i].b != 0)
            throw InvariantError("coefficient " + std::to_string(i) +
                                 " has a nonzero sqrt3 part: " + c_[i].str());
        out.push_back(c_[i].a);
    }
    return out;
}

bool AlgebraicSeries::is_zero() const {
    for (const auto& c : c_)
        if (!c.is_zero()) return false;
    return true;
}

namespace {

void same_order(const AlgebraicSeries& x, const AlgebraicSeries& y) {
    if (x.order() != y.order()) throw InvariantError("series orders differ");
}

}  // namespace

AlgebraicSeries operator+(const AlgebraicSeries& x, const AlgebraicSeries& y) {
    same_order(x, y);
    AlgebraicSeries s(x.order());
    for (int i = 0; i <= x.order(); ++i) s[i] = x[i] + y[i];
    return s;
}

AlgebraicSeries operator-(const AlgebraicSeries& x, const AlgebraicSeries& y) {
    same_order(x, y);
    AlgebraicSeries s(x.order());
    for (int i = 0; i <= x.order(); ++i) s[i] = x[i] - y[i];
    return s;
}

AlgebraicSeries operator*(const AlgebraicSeries& x, const AlgebraicSeries& y) {
    same_order(x, y);
    int N = x.order();
    AlgebraicSeries s(N);
    for (int i = 0; i <= N; ++i) {
        if (x[i].is_zero()) continue;
        for (int j = 0; i + j <= N; ++j) s[i + j] = s[i + j] + x[i] * y[j];
    }
    return s;
}

AlgebraicSeries operator*(const QSqrt3& c, const AlgebraicSeries& x) {
    AlgebraicSeries s(x.order());
    for (int i = 0; i <= x.order(); ++i) s[i] = c * x[i];
    return s;
}

AlgebraicSeries operator/(const AlgebraicSeries& x, const AlgebraicSeries& y) {
    same_order(x, y);
    if (y[0].is_zero()) throw InvariantError("series division needs an invertible constant term");
    int N = x.order();
    QSqrt3 inv = y[0].inverse();
    AlgebraicSeries q(N);
    for (int n = 0; n <= N; ++n) {
        QSqrt3 acc = x[n];
        for (int k = 1; k <= n; ++k) acc = acc - y[k] * q[n - k];
        q[n] = acc * inv;
    }
    return q;
}

FermatTower::FermatTower(int d) : d_(d) {
    if (d < 1 || d > 64) throw UserError("Fermat degree must be in 1..64");
    phi_.push_back(h_pure_power(d));
}

const HFunction& FermatTower::level(int n) {
    if (n < 0) throw UserError("tower level must be nonnegative");
    while (static_cast<int>(phi_.size()) <= n) phi_.push_back(compose_diag_inf(phi_.back(), d_));
    return phi_[n];
}

HFunction fermat_phi(int d, int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<FermatTower>> towers;
    std::lock_guard<std::mutex> lock(mu);
    auto& t = towers[d];
    if (!t) t = std::make_unique<FermatTower>(d);
    return t->level(n);
}

std::vector<Integer> zigzag(int N) {
    if (N < 0) throw UserError("zigzag length must be nonnegative");
    // Seidel-Entringer boustrophedon: row n has n+1 entries, zigzag(n) is its last.
    std::vector<Integer> out{1}, row{1};
    for (int n = 1; n <= N; ++n) {
        std::vector<Integer> next(n + 1);
        next[0] = 0;
        for (int k = 1; k <= n; ++k) next[k] = next[k - 1] + row[n - k];
        out.push_back(next[n]);
        row = std::move(next);
    }
    return out;
}

namespace {

void check_order(int N) {
    if (N < 0 || N > 64) throw UserError("series order must be in 0..64");
}

// sec + tan
AlgebraicSeries sec_plus_tan(int order) {
    auto one = AlgebraicSeries::constant(order, QSqrt3(1));
    return (one + AlgebraicSeries::sin(order)) / AlgebraicSeries::cos(order);
}

QSqrt3 q3(const Rational& a, const Rational& b = 0) { return QSqrt3(a, b); }

// Ingredients of the degree-3 closed form, all multiplied by alpha where they have a pole.
struct D3Constants {
    AlgebraicSeries aA, aB, aC, aD, G;
};

D3Constants d3_constants(int order) {
    const QSqrt3 r3 = QSqrt3::sqrt3();
    const QSqrt3 inv_r3 = q3(0, rat(1, 3));
    auto one = AlgebraicSeries::constant(order, QSqrt3(1));
    auto c1 = AlgebraicSeries::cos(order).scaled_arg(r3);
    auto s1 = AlgebraicSeries::sin(order).scaled_arg(r3);
    auto ch = AlgebraicSeries::cos(order).scaled_arg(q3(0, rat(1, 2)));
    auto sh = AlgebraicSeries::sin(order).scaled_arg(q3(0, rat(1, 2)));
    auto den = one + q3(2) * c1;
    D3Constants k{AlgebraicSeries(order), AlgebraicSeries(order), AlgebraicSeries(order),
                  AlgebraicSeries(order), AlgebraicSeries::geometric(order)};
    k.aA = (q3(6) * c1 - q3(0, 2) * sh) / (q3(3) * den);
    k.aB = q3(2) * (r3 * ch + s1) / den;
    k.aC = inv_r3 * k.aB;
    k.aD = q3(2) * (q3(2) * one + c1 + r3 * sh) / (r3 * den);
    return k;
}

// alpha * F_i(x) or alpha * G_i(x) on [0, 1/3]; fn is 1..3 for F, 4..6 for G.
AlgebraicSeries d3_piece(const D3Constants& k, int fn, const Rational& x) {
    int order = k.G.order();
    const QSqrt3 inv_r3 = q3(0, rat(1, 3));
    const QSqrt3 half(rat(1, 2));
    auto one = AlgebraicSeries::constant(order, QSqrt3(1));
    auto a = AlgebraicSeries::alpha(order);
    QSqrt3 arg = q3(0, rat(3, 2) * x);
    auto c = AlgebraicSeries::cos(order).scaled_arg(arg);
    auto s = AlgebraicSeries::sin(order).scaled_arg(arg);
    const auto& G = k.G;
    auto aD1 = AlgebraicSeries(order);  // D1 = 0
    auto aD2 = a * G;                    // D2 = 1/(1-alpha)
    auto axG = q3(x) * a * G;
    auto third = AlgebraicSeries::constant(order, rat(1, 3));
    auto two_thirds = AlgebraicSeries::constant(order, rat(2, 3));
    auto aG3 = q3(rat(1, 3)) * a * G;
    auto G3 = q3(rat(1, 3)) * G;
    switch (fn) {
        case 1:
            return axG + q3(rat(1, 3)) * aD1 - third + aG3 - G3 +
                   half * ((k.aA + inv_r3 * k.aD) * c + (k.aB + inv_r3 * k.aC) * s);
        case 2:
            return axG - q3(rat(1, 3)) * aD2 - two_thirds + q3(2) * aG3 + inv_r3 * k.aB * c -
                   inv_r3 * k.aA * s;
        case 3:
            return axG + q3(rat(1, 3)) * aD1 - third + aG3 + G3 +
                   half * ((inv_r3 * k.aD - k.aA) * c + (inv_r3 * k.aC - k.aB) * s);
        case 4:
            return q3(-1) * axG + q3(rat(1, 3)) * aD2 - third + aG3 - G3 +
                   half * ((k.aC + inv_r3 * k.aB) * c - (k.aD + inv_r3 * k.aA) * s);
        case 5:
            return q3(-1) * axG - q3(rat(1, 3)) * aD1 - two_thirds + q3(2) * aG3 +
                   inv_r3 * k.aD * c + inv_r3 * k.aC * s;
        case 6:
            return q3(-1) * axG + q3(rat(1, 3)) * aD2 - third + aG3 + G3 +
                   half * ((inv_r3 * k.aB - k.aC) * c + (k.aD - inv_r3 * k.aA) * s);
    }
    throw InvariantError("bad degree-3 piece index");
}

}  // namespace

SeriesPair series_d2(int N) {
    check_order(N);
    auto G = AlgebraicSeries::geometric(N);
    auto st = sec_plus_tan(N);
    return {(G + st).rational_parts(), (G - st).rational_parts()};
}

SeriesPair series_d3(int N) {
    check_order(N);
    const QSqrt3 r3 = QSqrt3::sqrt3();
    auto one = AlgebraicSeries::constant(N, QSqrt3(1));
    auto c1 = AlgebraicSeries::cos(N).scaled_arg(r3);
    auto s1 = AlgebraicSeries::sin(N).scaled_arg(r3);
    auto ch = AlgebraicSeries::cos(N).scaled_arg(q3(0, rat(1, 2)));
    auto sh = AlgebraicSeries::sin(N).scaled_arg(q3(0, rat(1, 2)));
    auto den = one + q3(2) * c1;
    auto c = q3(0, 2) * (r3 * ch + s1) / den;
    auto cp = r3 * (q3(2) * sh + AlgebraicSeries::constant(N, r3)) / den -
              AlgebraicSeries::geometric(N);
    return {c.rational_parts(), cp.rational_parts()};
}

std::vector<Rational> closed_phi_d2(int N, const Rational& x) {
    check_order(N);
    if (x < 0 || x > 1) throw UserError("closed form needs 0 <= x <= 1");
    int M = N + 1;
    auto a = AlgebraicSeries::alpha(M);
    auto G = AlgebraicSeries::geometric(M);
    auto one = AlgebraicSeries::constant(M, QSqrt3(1));
    auto st = sec_plus_tan(M);
    AlgebraicSeries P(M);
    if (x <= rat(1, 2)) {
        QSqrt3 arg(2 * x);
        P = q3(2 * x) * a * G - one + AlgebraicSeries::cos(M).scaled_arg(arg) +
            st * AlgebraicSeries::sin(M).scaled_arg(arg);
    } else {
        Rational y = x - rat(1, 2);
        QSqrt3 arg(2 * y);
        P = q3(2 * y) * a * G + (q3(2) * a - one) * G - AlgebraicSeries::sin(M).scaled_arg(arg) +
            st * AlgebraicSeries::cos(M).scaled_arg(arg);
    }
    auto out = (q3(rat(1, 2)) * P).div_alpha().rational_parts();
    return out;
}

std::vector<Rational> closed_phi_d3(int N, const Rational& x) {
    check_order(N);
    if (x < 0 || x > 1) throw UserError("closed form needs 0 <= x <= 1");
    auto k = d3_constants(N + 1);
    int fn;
    Rational local;
    if (x <= rat(1, 3)) {
        fn = 1;
        local = x;
    } else if (x <= rat(2, 3)) {
        fn = 2;
        local = x - rat(1, 3);
    } else {
        fn = 3;
        local = x - rat(2, 3);
    }
    return d3_piece(k, fn, local).div_alpha().rational_parts();
}

std::vector<Rational> default_phi_samples() {
    return {0,         rat(1, 7), rat(1, 6), rat(1, 4), rat(1, 3), rat(2, 5), rat(1, 2),
            rat(3, 5), rat(2, 3), rat(3, 4), rat(5, 6), rat(9, 10), 1};
}

PhiConsistencyReport verify_phi_consistency(int d, int N, const std::vector<Rational>& samples) {
    if (d != 2 && d != 3) throw UserError("closed forms exist for d = 2 and d = 3 only");
    check_order(N);
    PhiConsistencyReport rep;
    auto fail = [&](const std::string& msg) {
        if (rep.ok) rep.first_mismatch = msg;
        rep.ok = false;
    };
    for (const auto& x : samples) {
        auto coeffs = d == 2 ? closed_phi_d2(N, x) : closed_phi_d3(N, x);
        for (int n = 0; n <= N; ++n) {
            ++rep.checks;
            Rational it = fermat_phi(d, n)(x);
            if (it != coeffs[n])
                fail("phi_" + std::to_string(n) + "(" + to_string(x) + "): iteration " +
                     to_string(it) + ", closed form " + to_string(coeffs[n]));
        }
    }
    if (d == 3) {
        // The ten matching conditions between the six pieces, as series times alpha.
        auto k = d3_constants(N + 1);
        Rational z = 0, e = rat(1, 3);
        auto at = [&](int fn, const Rational& x) { return d3_piece(k, fn, x); };
        auto aG = AlgebraicSeries::alpha(N + 1) * k.G;
        const char* names[] = {"F1(0)=0",       "G1(1/3)=0",      "F1(1/3)=F2(0)",
                               "F2(0)=G1(0)",   "G1(0)=G2(1/3)",  "F2(1/3)=F3(0)",
                               "F3(0)=G2(0)",   "G2(0)=G3(1/3)",  "F3(1/3)=1/(1-a)",
                               "G3(0)=1/(1-a)"};
        AlgebraicSeries diffs[] = {at(1, z),
                                   at(4, e),
                                   at(1, e) - at(2, z),
                                   at(2, z) - at(4, z),
                                   at(4, z) - at(5, e),
                                   at(2, e) - at(3, z),
                                   at(3, z) - at(5, z),
                                   at(5, z) - at(6, e),
                                   at(3, e) - aG,
                                   at(6, z) - aG};
        for (int i = 0; i < 10; ++i) {
            ++rep.checks;
            if (!diffs[i].is_zero()) fail(std::string("boundary condition ") + names[i]);
        }
    }
    return rep;
}

Rational char2_v(int which, const Rational& t) {
    if (which != 1 && which != 2) throw UserError("v index must be 1 or 2");
    if (t <= 0) return 0;
    if (which == 1 && t >= 1) return rat(1, 9);
    if (t > 1) throw UserError("v2 is tabulated on [0, 1]");
    using State = std::pair<int, Rational>;
    return solve_affine_orbit(State{which, t}, [](const State& s) {
        const auto& [w, x] = s;
        if (x == 0) return AffineStep<State>::done(0);
        if (x * 2 <= 1) {
            Rational y = 2 * x;
            if (w == 1) return AffineStep<State>::link(rat(1, 4), State{2, y}, 0);
            return AffineStep<State>::link(rat(1, 4), State{1, y}, y / 4);
        }
        Rational y = 2 * x - 1;
        if (w == 1) return AffineStep<State>::done(rat(1, 9));
        return AffineStep<State>::done(rat(1, 9) + (y + 1) / 6);
    });
}

Rational char2_lw(int which, const Rational& x) {
    if (which != 1 && which != 2) throw UserError("Lw index must be 1 or 2");
    if (x <= 0) return 0;
    if (which == 1 && x >= 1) return rat(1, 27);
    if (x > 1) throw UserError("Lw2 is tabulated on [0, 1]");
    using State = std::pair<int, Rational>;
    return solve_affine_orbit(State{which, x}, [](const State& s) {
        const auto& [w, u] = s;
        if (u * 2 <= 1) {
            Rational y = 2 * u;
            if (w == 1) return AffineStep<State>::link(rat(1, 8), State{2, y}, 0);
            return AffineStep<State>::done(y / 6);
        }
        Rational y = 2 * u - 1;
        if (w == 1) return AffineStep<State>::done(rat(1, 27));
        return AffineStep<State>::link(rat(1, 8), State{1, y}, y / 8 + rat(1, 6));
    });
}

Char2TwoCubes char2_sum_two_cubes() {
    Char2TwoCubes out;
    out.v1 = [](const Rational& t) { return char2_v(1, t); };
    out.h = [](const Rational& t) -> Rational { return 9 * char2_v(1, t); };
    return out;
}

Char2CubicReport char2_cubic(int order) {
    if (order < 2 || order > 60) throw UserError("order must be in 2..60");
    Char2CubicReport rep;
    rep.h = [](const Rational& x) -> Rational { return 27 * char2_lw(1, x); };
    Rational x = 1;
    for (int i = 0; i <= order; ++i, x /= 2) rep.h_dyadic.push_back(rep.h(x));
    // h(x) = 27/8 Lw2(2x) = 9x/4 on [0, 1/4], so 2^i h(1/2^i) is constant from i = 2 on.
    Integer pw = 4;
    rep.e_hk = rep.h_dyadic[2] * 4;
    for (int i = 3; i <= order; ++i) {
        pw *= 2;
        if (rep.h_dyadic[i] * Rational(pw) != rep.e_hk)
            throw InvariantError("h(1/2^i) * 2^i is not stationary");
    }
    return rep;
}

}  // namespace hk
