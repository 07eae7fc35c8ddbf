#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "nilspec/extnat.hpp"

namespace nilspec {

// Symbolic subset of {1, 2, ...} u {inf}. Spectra of free abelian groups of
// rank >= 2 are infinite, so sets are never materialized; queries are
// membership and bounded enumeration only. Values are immutable and share
// structure, so they are safe to query concurrently.
class SpectrumExpr {
public:
    enum class Kind { Finite, Full, Product, Union, Power };

    static SpectrumExpr finite(std::set<ExtNat> members);
    static SpectrumExpr full();

    Kind kind() const { return node_->kind; }
    const std::set<ExtNat>& members() const { return node_->members; }
    const std::vector<SpectrumExpr>& children() const { return node_->children; }
    unsigned power_exponent() const { return node_->exponent; }

private:
    struct Node {
        Kind kind;
        std::set<ExtNat> members;          // Finite
        std::vector<SpectrumExpr> children; // Product, Union, Power (single child)
        unsigned exponent = 0;             // Power
    };
    explicit SpectrumExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;

    friend SpectrumExpr spec_product(std::vector<SpectrumExpr> specs);
    friend SpectrumExpr spec_union(std::vector<SpectrumExpr> specs);
    friend SpectrumExpr spec_pow(const SpectrumExpr& a, unsigned n);
};

// {a_1 * ... * a_n | a_i in A_i}; a single factor collapses to itself
SpectrumExpr spec_product(std::vector<SpectrumExpr> specs);

SpectrumExpr spec_union(std::vector<SpectrumExpr> specs);

// n-fold product A^(n); A^(1) is A itself
SpectrumExpr spec_pow(const SpectrumExpr& a, unsigned n);

// A^(1) u A^(2) u ... u A^(n)
SpectrumExpr spec_union_fold(const SpectrumExpr& a, unsigned n);

// Exact membership. Finite m recurses over ordered factorizations into
// divisors; inf is in a product iff it is in some factor.
bool spec_contains(const SpectrumExpr& a, const ExtNat& m);

struct SpectrumEnumeration {
    std::vector<Int> members; // sorted finite members <= bound
    bool has_infinity;        // whether inf is a member (independent of bound)
};
SpectrumEnumeration spec_enumerate(const SpectrumExpr& a, const Int& bound);

// Bounded-enumeration equality plus infinity-flag equality. This is a
// semi-decision used by tests and the CLI, not a canonical-form comparison.
bool spec_equivalent_up_to(const SpectrumExpr& a, const SpectrumExpr& b, const Int& bound);

// SpecR(Z^r): {1} for r = 0, {2, inf} for r = 1, everything for r >= 2
SpectrumExpr abelian_spectrum(unsigned rank);

// Literal grammar: `{2,inf}`, `full`, `prod(S1,S2)`, `pow(S,3)`,
// `union(S1,S2)`; whitespace-insensitive.
SpectrumExpr parse_spectrum(std::string_view text);
std::string format_spectrum(const SpectrumExpr& a);

} // namespace nilspec
