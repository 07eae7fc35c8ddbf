#pragma once

// Independent brute-force oracles used only by the test suites. These stay
// deliberately naive: they must not share code paths with the library
// implementations they check.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "nilspec/bigint.hpp"
#include "nilspec/extnat.hpp"
#include "nilspec/graph.hpp"
#include "nilspec/intmatrix.hpp"

namespace oracles {

using nilspec::ExtNat;
using nilspec::Int;

// cofactor expansion, exponential and obviously correct
inline Int det_cofactor(const nilspec::IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m.at(0, 0);
    Int sum = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j) == 0) continue;
        nilspec::IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        Int term = m.at(0, j) * det_cofactor(minor);
        sum += (j % 2 == 0) ? term : -term;
    }
    return sum;
}

// all products a_1 * ... * a_k of finite-or-infinite values drawn from the
// given finite sets; the definitional reading of a spectrum product
inline std::set<ExtNat> product_set(const std::vector<std::set<ExtNat>>& sets) {
    std::set<ExtNat> acc{ExtNat::finite(1)};
    for (const auto& s : sets) {
        std::set<ExtNat> next;
        for (const ExtNat& a : acc)
            for (const ExtNat& b : s) next.insert(nilspec::ext_mul(a, b));
        acc = std::move(next);
    }
    return acc;
}

inline std::set<ExtNat> power_set(const std::set<ExtNat>& s, unsigned n) {
    return product_set(std::vector<std::set<ExtNat>>(n, s));
}

// definitional join test: some proper bipartition (V1, V2) with every cross
// pair an edge
inline bool is_join_bruteforce(const nilspec::Graph& g) {
    const std::size_t n = g.size();
    if (n < 2) return false;
    // vertex 0 always on side A; mask selects the rest of side A. Excluding
    // the full mask keeps side B non-empty, so every proper bipartition with
    // 0 in A appears exactly once (mask 0 is A = {0}).
    for (std::size_t mask = 0; mask + 1 < (1u << (n - 1)); ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            bool ai = i == 0 || ((mask >> (i - 1)) & 1);
            for (std::size_t j = i + 1; j < n && ok; ++j) {
                bool aj = ((mask >> (j - 1)) & 1) != 0;
                if (ai != aj && !g.has_edge(i, j)) ok = false;
            }
        }
        if (ok) return true;
    }
    return false;
}

// number of Lyndon words of length c over r letters: words strictly smaller
// than all of their proper rotations
inline long lyndon_count(long r, long c) {
    std::vector<long> word(c, 0);
    long count = 0;
    for (;;) {
        bool lyndon = true;
        for (long s = 1; s < c && lyndon; ++s) {
            // compare word with its rotation by s
            for (long i = 0; i < c; ++i) {
                long a = word[i], b = word[(i + s) % c];
                if (a != b) {
                    if (a > b) lyndon = false;
                    break;
                }
                if (i == c - 1) lyndon = false; // equal to a proper rotation
            }
        }
        if (lyndon) ++count;
        long i = c - 1;
        while (i >= 0 && word[i] == r - 1) word[i--] = 0;
        if (i < 0) break;
        ++word[i];
    }
    return count;
}

} // namespace oracles
