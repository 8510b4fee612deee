#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hk/exactnum.hpp"

namespace hk {

// Integer polynomial in n variables; terms with equal exponents are merged.
struct MPoly {
    int n_vars = 0;
    std::map<std::vector<int>, Integer> terms;

    static MPoly variable(int n_vars, int i);
    static MPoly constant(int n_vars, const Integer& c);
    MPoly widened(int n) const;  // same polynomial, n >= n_vars variables
    MPoly shifted(int offset, int n) const;  // variable i becomes i + offset
    bool has_constant_term() const;
    std::string str() const;

    friend MPoly operator+(const MPoly& a, const MPoly& b);
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly pow(unsigned k) const;
};

// "x0^3+x1^3", "x^2*y - 3 z", "2x0x1"; x,y,z,w stand for x0..x3.
MPoly parse_mpoly(std::string_view s);

// k[x_1..x_n]/(x_i^{a_i}) over F_p, or over Q when p = 0.
struct StaircaseQuotient {
    unsigned p = 0;
    std::vector<int> bounds;

    StaircaseQuotient(unsigned p, std::vector<int> bounds);
    long dimension() const;
};

// length of the quotient by f^r: dim - rank(f^r).
long quotient_length(const StaircaseQuotient& q, const MPoly& f, long r);

struct JordanProfile {
    std::vector<long> l;        // l[i] = quotient_length(., i), until it stabilises
    std::map<long, long> e;     // block size -> multiplicity
    long nilpotency = 0;        // least i with f^i = 0
};
JordanProfile jordan_profile(const StaircaseQuotient& q, const MPoly& f);

Rational h_e_point(unsigned p, int e, const MPoly& f, const Rational& t);
Rational f_threshold_at_q(const StaircaseQuotient& q, const MPoly& f, long qpow);

// length of k[T_1..T_s]/(T_i^{t_i}, (T_1+...+T_s)^r); char 0 means over Q.
long d_integer(unsigned ch, const std::vector<long>& t, long r);

// Multilinear data on the cube t + [0,1]^{s+1}; phi[mask] is the coefficient of
// prod_{i in mask} eps_i, and the top coefficient is always 0.
struct HanData {
    long l = 0;
    std::vector<Integer> phi;
    bool odd = false;

    Rational phi_at(const std::vector<Rational>& r) const;
};
HanData han_data(unsigned ch, const std::vector<long>& t);

long bphi_coeff(unsigned ch, const std::vector<long>& t, long r);

// Factors live in disjoint variable blocks; phi is T_1 + ... + T_s.
bool discrete_multilinear_check(unsigned p, int e, const std::vector<MPoly>& factors, long r);

void han_cache_load(const std::string& path);
void han_cache_save(const std::string& path);
std::size_t han_cache_size();

}  // namespace hk
