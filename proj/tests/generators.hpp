#pragma once

// Deterministic cross-platform random helpers for tests.  mt19937_64 with a
// fixed seed is bit-stable everywhere; the std distributions are not, so the
// draws are done by hand.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "limitlog/ast.hpp"

namespace testgen {

using Rng = std::mt19937_64;

// Uniform in [lo, hi] without distribution objects.
inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

inline bool coin(Rng& rng, int percent_true = 50) { return uniform(rng, 0, 99) < percent_true; }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
    return xs[static_cast<size_t>(uniform(rng, 0, static_cast<std::int64_t>(xs.size()) - 1))];
}

// Random numeric term over the given variables (no Star), depth-bounded.
inline limitlog::Term random_term(Rng& rng, const std::vector<std::string>& vars, int depth) {
    using limitlog::Term;
    if (depth <= 0 || coin(rng, 40)) {
        if (!vars.empty() && coin(rng, 60)) return Term::variable(pick(rng, vars));
        return Term::constant(limitlog::Int(uniform(rng, -9, 9)));
    }
    Term a = random_term(rng, vars, depth - 1);
    Term b = random_term(rng, vars, depth - 1);
    switch (uniform(rng, 0, 2)) {
        case 0: return Term::add(std::move(a), std::move(b));
        case 1: return Term::sub(std::move(a), std::move(b));
        default: return Term::mul(std::move(a), std::move(b));
    }
}

}  // namespace testgen
