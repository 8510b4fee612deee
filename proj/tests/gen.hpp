#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "hk/exactnum.hpp"

namespace hktest {

// Seeded generator for property sweeps; every test gets its own seed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
    bool coin() { return uniform(0, 1) == 1; }

    hk::Rational rational(long lo_num, long hi_num, long max_den) {
        long d = uniform(1, max_den);
        return hk::rat(uniform(lo_num * d, hi_num * d), d);
    }
    hk::Rational unit(long max_den) { return rational(0, 1, max_den); }
    hk::Rational positive_unit(long max_den) {
        long d = uniform(1, max_den);
        return hk::rat(uniform(1, d), d);
    }

    std::vector<hk::Rational> sorted_distinct(int n, long den) {
        std::vector<long> ks;
        while (static_cast<int>(ks.size()) < n) {
            long k = uniform(1, den - 1);
            bool dup = false;
            for (long x : ks) dup = dup || x == k;
            if (!dup) ks.push_back(k);
        }
        std::sort(ks.begin(), ks.end());
        std::vector<hk::Rational> out;
        for (long k : ks) out.push_back(hk::rat(k, den));
        return out;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace hktest
