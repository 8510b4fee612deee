#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hk/exactnum.hpp"

namespace hk {

// One step of a self-referential evaluator: either a final value, or
// f(state) = coef * f(next) + constant.
template <class State>
struct AffineStep {
    bool terminal = false;
    Rational value;
    Rational coef;
    State next;
    Rational constant;

    static AffineStep done(Rational v) {
        AffineStep s;
        s.terminal = true;
        s.value = std::move(v);
        return s;
    }
    static AffineStep link(Rational c, State n, Rational k) {
        AffineStep s;
        s.coef = std::move(c);
        s.next = std::move(n);
        s.constant = std::move(k);
        return s;
    }
};

std::size_t orbit_cap();
void set_orbit_cap(std::size_t cap);

// Follows the orbit of `start` until it terminates or revisits a state, then solves the
// resulting cycle equation exactly.  State must be ordered (operator<).
template <class State, class StepFn>
Rational solve_affine_orbit(const State& start, StepFn&& step) {
    std::map<State, std::size_t> seen;
    // f(start) = P[i] + Q[i] * f(state_i)
    std::vector<Rational> P{Rational(0)}, Q{Rational(1)};
    State cur = start;
    const std::size_t cap = orbit_cap();
    for (std::size_t i = 0;; ++i) {
        if (Q.back() == 0) return P.back();
        auto [it, fresh] = seen.emplace(cur, i);
        if (!fresh) {
            std::size_t j = it->second;
            if (Q[j] == 0) return P[j];
            Rational A = Q[i] / Q[j];
            Rational B = (P[i] - P[j]) / Q[j];
            if (A == 1) throw InvariantError("orbit equation is singular");
            Rational fj = B / (1 - A);
            return P[j] + Q[j] * fj;
        }
        if (i >= cap)
            throw UserError("orbit exceeds " + std::to_string(cap) +
                            " states; raise the cap with set_orbit_cap");
        AffineStep<State> s = step(cur);
        if (s.terminal) return P.back() + Q.back() * s.value;
        P.push_back(P.back() + Q.back() * s.constant);
        Q.push_back(Q.back() * s.coef);
        cur = std::move(s.next);
    }
}

}  // namespace hk
