#include "hk/kernels.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hk/fforacle.hpp"
#include "hk/orbit.hpp"

namespace hk {

bool is_prime(unsigned p) {
    if (p < 2) return false;
    for (unsigned d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void require_prime(unsigned p) {
    if (!is_prime(p)) throw UserError(std::to_string(p) + " is not a prime");
}

Vec3 parse_point(std::string_view s) {
    Vec3 v;
    std::size_t i = 0, start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k < s.size() && s[k] != ',') continue;
        if (i == 3) throw UserError("point needs exactly three coordinates");
        v[i++] = parse_rational(s.substr(start, k - start));
        start = k + 1;
    }
    if (i != 3) throw UserError("point needs exactly three coordinates");
    return v;
}

namespace {

Vec3 sorted(Vec3 v) {
    std::sort(v.begin(), v.end());
    return v;
}

Rational pair_sum(const Vec3& t) { return t[0] * t[1] + t[0] * t[2] + t[1] * t[2]; }

// D on [0,1]^3, the same for every characteristic outside the interior of T0.
bool outside_T0_value(const Vec3& s, Rational& out) {
    if (s[0] + s[1] <= s[2]) {
        out = s[0] * s[1];
        return true;
    }
    Rational sum = s[0] + s[1] + s[2];
    if (sum >= 2) {
        out = 1 - sum + pair_sum(s);
        return true;
    }
    return false;
}

Rational cube_inf(const Vec3& x) {
    Vec3 s = sorted(x);
    Rational v;
    if (outside_T0_value(s, v)) return v;
    return (2 * pair_sum(s) - s[0] * s[0] - s[1] * s[1] - s[2] * s[2]) / 4;
}

bool in_unit_cube(const Vec3& x) {
    for (const auto& v : x)
        if (v < 0 || v > 1) return false;
    return true;
}

struct CellSplit {
    std::vector<long> t;
    Vec3 r, reflected;
};

CellSplit split(const Vec3& x) {
    CellSplit c;
    for (int i = 0; i < 3; ++i) {
        Integer f = floor_z(x[i]);
        c.t.push_back(f.get_si());
        c.r[i] = x[i] - Rational(f);
    }
    c.reflected = c.r;
    if ((c.t[0] + c.t[1] + c.t[2]) % 2 != 0) c.reflected[0] = 1 - c.r[0];
    return c;
}

std::vector<Rational> as_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }

}  // namespace

bool in_T0(const Vec3& x) {
    return x[0] + x[1] + x[2] <= 2 && x[0] <= x[1] + x[2] && x[1] <= x[0] + x[2] &&
           x[2] <= x[0] + x[1];
}

Rational dinf_eval(const Vec3& x) {
    for (const auto& v : x)
        if (v < 0) return 0;
    if (in_unit_cube(x)) return cube_inf(x);
    CellSplit c = split(x);
    HanData h = han_data(0, c.t);
    return h.l * cube_inf(c.reflected) + h.phi_at(as_vec(c.r));
}

namespace {

Poly2 poly2(std::initializer_list<std::tuple<int, int, Rational>> terms) {
    Poly2 p;
    for (const auto& [i, j, v] : terms) {
        if (static_cast<int>(p.c.size()) <= i) p.c.resize(i + 1);
        for (auto& row : p.c)
            if (static_cast<int>(row.size()) <= j) row.resize(j + 1, 0);
        p.c[i][j] += v;
    }
    std::size_t w = 0;
    for (const auto& row : p.c) w = std::max(w, row.size());
    for (auto& row : p.c) row.resize(w, 0);
    return p;
}

}  // namespace

Piecewise2D dinf_slice(const Rational& c) {
    if (c <= 0 || c > 1) throw UserError("slice level must lie in (0, 1]");
    std::vector<Region> regs;
    regs.push_back({"B1", {{1, 1, c}}, poly2({{1, 1, 1}})});
    regs.push_back({"B2", {{1, -1, -c}, {0, 1, 1}}, poly2({{1, 0, c}})});
    regs.push_back({"B3", {{-1, 1, -c}}, poly2({{0, 1, c}})});
    regs.push_back({"B4", {{-1, -1, c - 2}, {0, 1, 1}},
                    poly2({{0, 0, 1 - c}, {1, 0, c - 1}, {0, 1, c - 1}, {1, 1, 1}})});
    regs.push_back({"B5", {{0, -1, -1}}, poly2({{1, 0, c}})});
    regs.push_back({"T0",
                    {{-1, -1, -c}, {-1, 1, c}, {1, -1, c}, {1, 1, 2 - c}, {0, 1, 1}},
                    poly2({{1, 1, Rational(1, 2)},
                           {1, 0, c / 2},
                           {0, 1, c / 2},
                           {2, 0, Rational(-1, 4)},
                           {0, 2, Rational(-1, 4)},
                           {0, 0, -c * c / 4}})});
    return Piecewise2D(0, 1, 0, std::nullopt, std::move(regs));
}

PiecewisePoly dinf_line(const Vec3& p0, const Vec3& dir, const Rational& a, const Rational& b) {
    if (!(a < b)) throw UserError("dinf_line needs a < b");
    std::vector<Rational> cuts{a, b};
    static const int sig[7][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1},
                                  {1, 0, 0}, {0, 1, 0},  {0, 0, 1}};
    for (const auto& s : sig) {
        Rational g0 = 0, g1 = 0;
        for (int i = 0; i < 3; ++i) {
            g0 += s[i] * p0[i];
            g1 += s[i] * dir[i];
        }
        if (g1 == 0) continue;
        Rational va = g0 + g1 * a, vb = g0 + g1 * b;
        if (vb < va) std::swap(va, vb);
        Integer lo = floor_z(va), hi = floor_z(vb);
        if (hi - lo > 100000) throw UserError("line crosses too many cells");
        for (Integer k = lo; k <= hi; ++k) {
            Rational s0 = (Rational(k) - g0) / g1;
            if (a < s0 && s0 < b) cuts.push_back(s0);
        }
    }
    auto f = [&](const Rational& s) {
        return dinf_eval(Vec3{p0[0] + s * dir[0], p0[1] + s * dir[1], p0[2] + s * dir[2]});
    };
    return pp_from_evaluator(f, cuts, 2, f(a), f(b));
}

Rational dinf_partial_r(const Rational& t1, const Rational& t2, const Rational& r, Side side) {
    if (t1 < 0 || t2 < 0 || r < 0) throw UserError("partial derivative needs nonnegative inputs");
    if (side == Side::Minus && r == 0) throw UserError("left derivative needs r > 0");
    Rational lo = r > 1 ? r - 1 : Rational(0);
    PiecewisePoly g = dinf_line({t1, t2, 0}, {0, 0, 1}, lo, r + 1);
    return g.derivative_side(r, side);
}

SliceKernel dinf_kernel(const Rational& c, const Rational& x_hi, const Rational& t_hi) {
    if (c < 0) throw UserError("kernel level must be nonnegative");
    if (!(x_hi > 0) || t_hi < 0) throw UserError("empty kernel domain");
    SliceKernel K;
    K.x_lo = 0;
    K.x_hi = x_hi;
    K.degree = 2;
    std::set<std::tuple<int, int, Rational>> seen;
    auto add = [&](int a, int b, const Rational& v) {
        if (seen.insert({a, b, v}).second) K.lines.push_back({a, b, v});
    };
    long X = floor_z(x_hi).get_si() + 1, T = floor_z(t_hi).get_si() + 1;
    for (long k = 0; k <= X; ++k) add(1, 0, Rational(k));
    for (long k = 0; k <= T; ++k) add(0, 1, Rational(k));
    for (long k = -1; k <= X + T + 1; ++k) {
        add(1, 1, k + c);
        add(1, 1, k - c);
    }
    for (long k = -T - 1; k <= X + 1; ++k) {
        add(1, -1, k + c);
        add(1, -1, k - c);
    }
    K.eval = [c](const Rational& x, const Rational& t) { return dinf_eval(Vec3{x, t, c}); };
    return K;
}

// ---------------------------------------------------------------- char p

namespace {

Rational dp_cube(unsigned p, const Vec3& x) {
    const Rational p2 = Rational(p) * p;
    auto step = [&](const Vec3& s) -> AffineStep<Vec3> {
        if (s[0] == 0) return AffineStep<Vec3>::done(0);
        Rational v;
        if (outside_T0_value(s, v)) return AffineStep<Vec3>::done(v);
        std::vector<long> t(3);
        Vec3 r;
        for (int i = 0; i < 3; ++i) {
            Rational y = s[i] * p;
            long f = std::min<long>(floor_z(y).get_si(), p - 1);
            t[i] = f;
            r[i] = y - f;
        }
        HanData h = han_data(p, t);
        Vec3 nr = r;
        if (h.odd) nr[0] = 1 - r[0];
        return AffineStep<Vec3>::link(h.l / p2, sorted(nr), h.phi_at(as_vec(r)) / p2);
    };
    return solve_affine_orbit(sorted(x), step);
}

}  // namespace

Rational dp_eval(unsigned p, const Vec3& x) {
    require_prime(p);
    for (const auto& v : x)
        if (v < 0) return 0;
    if (in_unit_cube(x)) return dp_cube(p, x);
    CellSplit c = split(x);
    HanData h = han_data(p, c.t);
    return h.l * dp_cube(p, c.reflected) + h.phi_at(as_vec(c.r));
}

namespace {

struct AxisState {
    Rational c1, c3, a;
    bool operator<(const AxisState& o) const {
        if (c1 != o.c1) return c1 < o.c1;
        if (c3 != o.c3) return c3 < o.c3;
        return a < o.a;
    }
};

// Solves x = M x + b exactly; rows are sparse.
std::vector<Rational> solve_fixed_point(const std::vector<std::map<std::size_t, Rational>>& M,
                                        const std::vector<Rational>& b) {
    std::size_t n = b.size();
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n + 1, 0));
    for (std::size_t i = 0; i < n; ++i) {
        A[i][i] = 1;
        for (const auto& [j, c] : M[i]) A[i][j] -= c;
        A[i][n] = b[i];
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) throw InvariantError("axis integral system is singular");
        std::swap(A[piv], A[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rational f = A[r][col] / A[col][col];
            for (std::size_t k = col; k <= n; ++k) A[r][k] -= f * A[col][k];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
    return x;
}

}  // namespace

Rational dp_axis_integral(unsigned p, const Rational& c1, const Rational& c3, const Rational& a) {
    require_prime(p);
    for (const auto* v : {&c1, &c3, &a})
        if (*v < 0 || *v > 1) throw UserError("axis integral needs c1, c3, a in [0, 1]");
    const Rational p3 = Rational(p) * p * p;
    std::map<AxisState, std::size_t> index;
    std::vector<AxisState> states;
    std::vector<std::map<std::size_t, Rational>> M;
    std::vector<Rational> b;
    auto intern = [&](const AxisState& s) {
        auto [it, fresh] = index.emplace(s, states.size());
        if (fresh) {
            states.push_back(s);
            M.emplace_back();
            b.emplace_back(0);
        }
        return it->second;
    };
    intern({c1, c3, a});
    const std::size_t cap = orbit_cap();
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i >= cap) throw UserError("axis integral orbit exceeds the orbit cap; raise the cap");
        AxisState s = states[i];
        if (s.c1 == 0 || s.c3 == 0 || s.a == 0) continue;
        if (s.c1 == 1 || s.c3 == 1) {
            // D(c, t, 1) = c t on the unit cube
            b[i] = (s.c1 == 1 ? s.c3 : s.c1) * s.a * s.a / 2;
            continue;
        }
        long t1 = std::min<long>(floor_z(s.c1 * p).get_si(), p - 1);
        long t3 = std::min<long>(floor_z(s.c3 * p).get_si(), p - 1);
        Rational r1 = s.c1 * p - t1, r3 = s.c3 * p - t3;
        Rational ap = s.a * p;
        long K = std::min<long>(floor_z(ap).get_si(), p - 1);
        for (long k = 0; k <= K; ++k) {
            Rational upper = k < K ? Rational(1) : ap - K;
            if (upper == 0) continue;
            HanData h = han_data(p, {t1, k, t3});
            Rational rr1 = h.odd ? 1 - r1 : r1;
            std::size_t j = intern({rr1, r3, upper});
            Rational coef = Rational(h.l) / p3;
            M[i][j] += coef;
            // phi is affine in the integrated coordinate
            b[i] += upper * h.phi_at({r1, upper / 2, r3}) / p3;
        }
    }
    return solve_fixed_point(M, b)[0];
}

namespace {

void require_cube(const Vec3& x) {
    if (!in_unit_cube(x)) throw UserError("the explicit IFS is defined on [0,1]^3");
}

}  // namespace

Rational dp_char2(const Vec3& x) {
    require_cube(x);
    const Rational half(1, 2), quarter(1, 4);
    auto step = [&](const Vec3& s) -> AffineStep<Vec3> {
        if (s[0] == 0) return AffineStep<Vec3>::done(0);
        if (s[2] <= half) return AffineStep<Vec3>::link(quarter, {2 * s[0], 2 * s[1], 2 * s[2]}, 0);
        if (s[1] <= half) return AffineStep<Vec3>::done(s[0] * s[1]);
        if (s[0] <= half)
            return AffineStep<Vec3>::link(quarter, sorted({2 * s[0], 2 * s[1] - 1, 2 * s[2] - 1}),
                                          s[0] / 2);
        return AffineStep<Vec3>::done(1 - s[0] - s[1] - s[2] + pair_sum(s));
    };
    return solve_affine_orbit(sorted(x), step);
}

Rational dp_char3(const Vec3& x) {
    require_cube(x);
    const Rational third(1, 3), ninth(1, 9);
    auto step = [&](const Vec3& s) -> AffineStep<Vec3> {
        if (s[0] == 0) return AffineStep<Vec3>::done(0);
        Rational v;
        if (outside_T0_value(s, v)) return AffineStep<Vec3>::done(v);
        long a[3];
        for (int i = 0; i < 3; ++i) a[i] = std::min<long>(floor_z(3 * s[i]).get_si(), 2);
        if (a[2] == 0) return AffineStep<Vec3>::link(ninth, {3 * s[0], 3 * s[1], 3 * s[2]}, 0);
        if (a[1] == 0) return AffineStep<Vec3>::done(s[0] * s[1]);
        if (a[0] == 0)
            return AffineStep<Vec3>::link(1, sorted({s[0], s[1] - third, s[2] - third}),
                                          s[0] * third);
        if (a[0] == 1 && a[1] == 1 && a[2] == 1)
            return AffineStep<Vec3>::link(
                1, sorted({2 * third - s[0], s[1] - third, s[2] - third}),
                ninth + (s[0] - third) * (s[1] + s[2] - 2 * third));
        return AffineStep<Vec3>::link(1, sorted({s[0], 1 - s[1], 1 - s[2]}),
                                      s[0] * (s[1] + s[2] - 1));
    };
    return solve_affine_orbit(sorted(x), step);
}

// ---------------------------------------------------------------- geometry

namespace {

using Row = std::array<int, 3>;
const Row kA[4] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
const int kB[4] = {2, 0, 0, 0};

// Vertices of {u >= 0, |A^T u|_inf <= 1}; the L1 distance from x to {Ay <= b}
// is the max over them of u.(Ax - b), clipped at 0.
const std::vector<std::array<Rational, 4>>& dual_vertices() {
    static const std::vector<std::array<Rational, 4>> verts = [] {
        // constraint k: coefficient row g and bound h, g.u <= h
        std::vector<std::pair<std::array<Rational, 4>, Rational>> cons;
        for (int i = 0; i < 4; ++i) {
            std::array<Rational, 4> g{0, 0, 0, 0};
            g[i] = -1;
            cons.push_back({g, 0});
        }
        for (int j = 0; j < 3; ++j)
            for (int sgn : {1, -1}) {
                std::array<Rational, 4> g;
                for (int i = 0; i < 4; ++i) g[i] = sgn * kA[i][j];
                cons.push_back({g, 1});
            }
        std::set<std::array<Rational, 4>> found;
        const int m = static_cast<int>(cons.size());
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                for (int c = b + 1; c < m; ++c)
                    for (int d = c + 1; d < m; ++d) {
                        int idx[4] = {a, b, c, d};
                        std::array<std::array<Rational, 5>, 4> M;
                        for (int r = 0; r < 4; ++r) {
                            for (int k = 0; k < 4; ++k) M[r][k] = cons[idx[r]].first[k];
                            M[r][4] = cons[idx[r]].second;
                        }
                        bool singular = false;
                        for (int col = 0; col < 4 && !singular; ++col) {
                            int piv = col;
                            while (piv < 4 && M[piv][col] == 0) ++piv;
                            if (piv == 4) {
                                singular = true;
                                break;
                            }
                            std::swap(M[piv], M[col]);
                            for (int r = 0; r < 4; ++r) {
                                if (r == col || M[r][col] == 0) continue;
                                Rational f = M[r][col] / M[col][col];
                                for (int k = col; k < 5; ++k) M[r][k] -= f * M[col][k];
                            }
                        }
                        if (singular) continue;
                        std::array<Rational, 4> u;
                        for (int k = 0; k < 4; ++k) u[k] = M[k][4] / M[k][k];
                        bool ok = true;
                        for (const auto& [g, h] : cons) {
                            Rational s = 0;
                            for (int k = 0; k < 4; ++k) s += g[k] * u[k];
                            if (s > h) ok = false;
                        }
                        if (ok) found.insert(u);
                    }
        return std::vector<std::array<Rational, 4>>(found.begin(), found.end());
    }();
    return verts;
}

Rational cell_distance(const Vec3& x, const std::array<long, 3>& corner) {
    long parity = corner[0] + corner[1] + corner[2];
    bool odd = parity % 2 != 0;
    // even: A0 (y - r) <= b0; odd: -A0 (y - r - 1) <= b0
    std::array<Rational, 4> slack;
    for (int i = 0; i < 4; ++i) {
        Rational s = 0;
        for (int j = 0; j < 3; ++j) {
            Rational shift = odd ? Rational(corner[j] + 1) : Rational(corner[j]);
            s += kA[i][j] * (x[j] - shift);
        }
        slack[i] = (odd ? -s : s) - kB[i];
    }
    Rational best = 0;
    for (const auto& u : dual_vertices()) {
        Rational v = 0;
        for (int i = 0; i < 4; ++i) v += u[i] * slack[i];
        if (v > best) best = v;
    }
    return best;
}

}  // namespace

Rational theta_dist(const Vec3& x) {
    std::array<long, 3> base;
    for (int i = 0; i < 3; ++i) base[i] = floor_z(x[i]).get_si();
    std::optional<Rational> best;
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c) {
                Rational d = cell_distance(x, {base[0] + a, base[1] + b, base[2] + c});
                if (!best || d < *best) best = d;
                if (*best == 0) return 0;
            }
    return *best;
}

Rational syzygy_gap(unsigned p, const Vec3& x) {
    require_prime(p);
    if (!(x[0] <= x[1] + x[2] && x[1] <= x[0] + x[2] && x[2] <= x[0] + x[1]))
        throw UserError("syzygy gap needs a point satisfying the triangle inequalities");
    Rational best = 0, scale = 1;
    Vec3 y = x;
    std::set<Vec3> seen;
    const std::size_t cap = orbit_cap();
    for (std::size_t n = 1;; ++n) {
        scale /= p;
        if (scale <= best) break;
        for (int i = 0; i < 3; ++i) {
            y[i] *= p;
            y[i] -= 2 * floor_q(y[i] / 2);
        }
        if (!seen.insert(y).second) break;
        if (n > cap) throw UserError("gap orbit exceeds the orbit cap; raise the cap");
        Rational d = theta_dist(y) * scale / 2;
        if (d > best) best = d;
    }
    return best;
}

bool is_attached(unsigned p, const Vec3& x) {
    require_prime(p);
    if (in_unit_cube(x)) {
        Vec3 s = sorted(x);
        Rational v;
        if (s[0] == 0 || outside_T0_value(s, v)) return true;
        return syzygy_gap(p, x) == 0;
    }
    return dp_eval(p, x) == dinf_eval(x);
}

bool upright_eventually_attached(unsigned p, const Rational& a, const Rational& b) {
    require_prime(p);
    if (p == 2) throw UserError("the upright criterion assumes an odd prime");
    auto vp = [p](const Integer& den) {
        Integer d = den;
        long v = 0;
        while (d % p == 0) {
            d /= p;
            ++v;
        }
        return v;
    };
    long m = std::max(vp(a.get_den()), vp(b.get_den()));
    Integer pm = 1;
    for (long i = 0; i < m; ++i) pm *= p;
    auto half_odd = [&](const Rational& v) {
        Rational w = 2 * v * Rational(pm);
        return w.get_den() == 1 && w.get_num() % 2 != 0;
    };
    return half_odd(a) && half_odd(b);
}

// ---------------------------------------------------------------- s-fold addition

Rational ds_inf_eval(const std::vector<Rational>& t, const Rational& r) {
    if (t.size() < 2 || t.size() > 5) throw UserError("s-fold kernel supports 2 <= s <= 5");
    for (const auto& v : t)
        if (v <= 0) return 0;
    if (r <= 0) return 0;
    if (t.size() == 2) return dinf_eval(t[0], t[1], r);
    Rational reach = t[0] + t[1];
    PiecewisePoly H = dinf_line({t[0], t[1], 0}, {0, 0, 1}, 0, reach);
    for (std::size_t j = 2; j + 1 < t.size(); ++j) {
        Measure mu = neg_dh_measure(H);
        Rational next = reach + t[j];
        H = slice_pair(dinf_kernel(t[j], next, reach), mu);
        reach = next;
    }
    Measure mu = neg_dh_measure(H);
    PiecewisePoly f = dinf_line({0, t.back(), r}, {1, 0, 0}, 0, reach);
    return measure_pair(f, mu);
}

}  // namespace hk
