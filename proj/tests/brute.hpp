#pragma once

// Brute-force lengths of k[x]/(x_i^{a_i}, f^r) by dense elimination, written independently of
// the library oracle.

#include <gmpxx.h>

#include <map>
#include <utility>
#include <vector>

namespace hktest {

using Exps = std::vector<int>;
using Terms = std::map<Exps, long>;

inline Terms truncated_product(const Terms& a, const Terms& b, const Exps& bounds) {
    Terms out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            Exps e(ea.size());
            bool keep = true;
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = ea[i] + eb[i];
                keep = keep && e[i] < bounds[i];
            }
            if (keep) out[e] += ca * cb;
        }
    return out;
}

inline long rank_mod(std::vector<std::vector<long>> m, long p) {
    long rank = 0;
    std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<long>(m.size()); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] % p == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        long inv = 1, base = ((m[rank][c] % p) + p) % p;
        for (long k = p - 2; k > 0; k >>= 1, base = base * base % p)
            if (k & 1) inv = inv * base % p;
        for (auto& x : m[rank]) x = ((x % p) + p) % p * inv % p;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == static_cast<std::size_t>(rank)) continue;
            long f = ((m[r][c] % p) + p) % p;
            if (f == 0) continue;
            for (std::size_t k = 0; k < cols; ++k) m[r][k] = ((m[r][k] - f * m[rank][k]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

inline long rank_q(std::vector<std::vector<mpq_class>> m) {
    long rank = 0;
    std::size_t cols = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && rank < static_cast<long>(m.size()); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t r = rank + 1; r < m.size(); ++r) {
            if (m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[rank][c];
            for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
        }
        ++rank;
    }
    return rank;
}

// p = 0 means over Q.
inline long brute_length(long p, const Exps& bounds, const Terms& f, long r) {
    if (r <= 0) return 0;
    std::vector<Exps> basis{Exps(bounds.size(), 0)};
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        std::vector<Exps> next;
        for (const auto& e : basis)
            for (int k = 0; k < bounds[i]; ++k) {
                Exps x = e;
                x[i] = k;
                next.push_back(x);
            }
        basis = next;
    }
    std::map<Exps, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    Terms power{{Exps(bounds.size(), 0), 1}};
    for (long k = 0; k < r; ++k) {
        power = truncated_product(power, f, bounds);
        if (p)
            for (auto& [e, c] : power) c %= p;
    }
    std::vector<std::vector<long>> rows;
    for (const auto& m : basis) {
        Terms row = truncated_product(power, Terms{{m, 1}}, bounds);
        std::vector<long> v(basis.size(), 0);
        for (const auto& [e, c] : row) v[index[e]] = c;
        rows.push_back(v);
    }
    long rank;
    if (p) {
        rank = rank_mod(rows, p);
    } else {
        std::vector<std::vector<mpq_class>> q;
        for (const auto& row : rows) q.emplace_back(row.begin(), row.end());
        rank = rank_q(q);
    }
    return static_cast<long>(basis.size()) - rank;
}

// k[T1, T2]/(T1^a, T2^b, (T1 + T2)^c)
inline long brute_d(long p, int a, int b, long c) {
    if (a == 0 || b == 0) return 0;
    return brute_length(p, {a, b}, Terms{{{1, 0}, 1}, {{0, 1}, 1}}, c);
}

}  // namespace hktest
