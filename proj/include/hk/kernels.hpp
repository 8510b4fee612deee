#pragma once

#include <array>
#include <vector>

#include "hk/exactnum.hpp"

namespace hk {

using Vec3 = std::array<Rational, 3>;

Vec3 parse_point(std::string_view s);  // "a/b,c/d,e/f"
bool in_T0(const Vec3& x);             // closed unit tetrahedron cell

// Limit kernel of T1 + T2.
Rational dinf_eval(const Vec3& x);
inline Rational dinf_eval(const Rational& a, const Rational& b, const Rational& c) {
    return dinf_eval(Vec3{a, b, c});
}

// Region table of (x, t) -> D_inf(x, t, c) on [0,1] x [0, inf).
Piecewise2D dinf_slice(const Rational& c);

// s -> D_inf(p0 + s*dir) on [a, b], extended constantly.
PiecewisePoly dinf_line(const Vec3& p0, const Vec3& dir, const Rational& a, const Rational& b);

Rational dinf_partial_r(const Rational& t1, const Rational& t2, const Rational& r, Side side);

// (x, t) -> D_inf(x, t, c) on [0, x_hi] x [0, t_hi] as a slice kernel.
SliceKernel dinf_kernel(const Rational& c, const Rational& x_hi, const Rational& t_hi);

// Characteristic-p kernel of T1 + T2.
Rational dp_eval(unsigned p, const Vec3& x);
// integral of D_p(c1, t, c3) over t in [0, a]; all arguments in [0, 1].
Rational dp_axis_integral(unsigned p, const Rational& c1, const Rational& c3, const Rational& a);
Rational dp_char2(const Vec3& x);
Rational dp_char3(const Vec3& x);

Rational theta_dist(const Vec3& x);  // L1 distance to the tetrahedral cells
Rational syzygy_gap(unsigned p, const Vec3& x);
bool is_attached(unsigned p, const Vec3& x);
bool upright_eventually_attached(unsigned p, const Rational& a, const Rational& b);

// Limit kernel of T1 + ... + Ts at (t, r), s = t.size() <= 5.
Rational ds_inf_eval(const std::vector<Rational>& t, const Rational& r);

bool is_prime(unsigned p);
void require_prime(unsigned p);

}  // namespace hk
