#include "nilspec/spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace nilspec {

SpectrumExpr SpectrumExpr::finite(std::set<ExtNat> members) {
    if (members.empty())
        throw DomainError("SpectrumExpr: finite sets must be non-empty");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Finite;
    n->members = std::move(members);
    return SpectrumExpr(std::move(n));
}

SpectrumExpr SpectrumExpr::full() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Full;
    return SpectrumExpr(std::move(n));
}

SpectrumExpr spec_product(std::vector<SpectrumExpr> specs) {
    if (specs.empty()) throw DomainError("spec_product: empty factor list");
    if (specs.size() == 1) return specs[0];
    auto n = std::make_shared<SpectrumExpr::Node>();
    n->kind = SpectrumExpr::Kind::Product;
    n->children = std::move(specs);
    return SpectrumExpr(std::move(n));
}

SpectrumExpr spec_union(std::vector<SpectrumExpr> specs) {
    if (specs.empty()) throw DomainError("spec_union: empty list");
    if (specs.size() == 1) return specs[0];
    auto n = std::make_shared<SpectrumExpr::Node>();
    n->kind = SpectrumExpr::Kind::Union;
    n->children = std::move(specs);
    return SpectrumExpr(std::move(n));
}

SpectrumExpr spec_pow(const SpectrumExpr& a, unsigned n) {
    if (n == 0) throw DomainError("spec_pow: exponent must be >= 1");
    if (n == 1) return a;
    auto node = std::make_shared<SpectrumExpr::Node>();
    node->kind = SpectrumExpr::Kind::Power;
    node->children = {a};
    node->exponent = n;
    return SpectrumExpr(std::move(node));
}

SpectrumExpr spec_union_fold(const SpectrumExpr& a, unsigned n) {
    if (n == 0) throw DomainError("spec_union_fold: n must be >= 1");
    std::vector<SpectrumExpr> parts;
    parts.reserve(n);
    for (unsigned i = 1; i <= n; ++i) parts.push_back(spec_pow(a, i));
    return spec_union(std::move(parts));
}

namespace {

std::vector<Int> divisors(const Int& m) {
    std::vector<Int> small, large;
    for (Int d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        small.push_back(d);
        if (d * d != m) large.push_back(m / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

// does the ordered factor list contain a factorization of finite m?
bool product_contains_finite(const std::vector<const SpectrumExpr*>& factors,
                             std::size_t idx, const Int& m) {
    if (idx + 1 == factors.size())
        return spec_contains(*factors[idx], ExtNat::finite(m));
    for (const Int& d : divisors(m))
        if (spec_contains(*factors[idx], ExtNat::finite(d)) &&
            product_contains_finite(factors, idx + 1, m / d))
            return true;
    return false;
}

std::vector<const SpectrumExpr*> product_factors(const SpectrumExpr& a) {
    std::vector<const SpectrumExpr*> fs;
    if (a.kind() == SpectrumExpr::Kind::Product) {
        for (const auto& c : a.children()) fs.push_back(&c);
    } else { // Power
        for (unsigned i = 0; i < a.power_exponent(); ++i) fs.push_back(&a.children()[0]);
    }
    return fs;
}

} // namespace

bool spec_contains(const SpectrumExpr& a, const ExtNat& m) {
    switch (a.kind()) {
    case SpectrumExpr::Kind::Finite:
        return a.members().count(m) > 0;
    case SpectrumExpr::Kind::Full:
        return true;
    case SpectrumExpr::Kind::Union:
        return std::any_of(a.children().begin(), a.children().end(),
                           [&](const SpectrumExpr& c) { return spec_contains(c, m); });
    case SpectrumExpr::Kind::Product:
    case SpectrumExpr::Kind::Power: {
        auto fs = product_factors(a);
        if (m.is_infinite()) {
            // every expression is non-empty by construction, so inf is in a
            // product exactly when some factor contains it
            return std::any_of(fs.begin(), fs.end(),
                               [&](const SpectrumExpr* f) {
                                   return spec_contains(*f, ExtNat::infinity());
                               });
        }
        return product_contains_finite(fs, 0, m.value());
    }
    }
    throw InternalError("spec_contains: unreachable");
}

SpectrumEnumeration spec_enumerate(const SpectrumExpr& a, const Int& bound) {
    if (bound < 1) throw DomainError("spec_enumerate: bound must be >= 1");
    switch (a.kind()) {
    case SpectrumExpr::Kind::Finite: {
        SpectrumEnumeration e{{}, false};
        for (const ExtNat& v : a.members()) {
            if (v.is_infinite())
                e.has_infinity = true;
            else if (v.value() <= bound)
                e.members.push_back(v.value());
        }
        return e;
    }
    case SpectrumExpr::Kind::Full: {
        SpectrumEnumeration e{{}, true};
        for (Int i = 1; i <= bound; ++i) e.members.push_back(i);
        return e;
    }
    case SpectrumExpr::Kind::Union: {
        std::set<Int> acc;
        bool inf = false;
        for (const auto& c : a.children()) {
            SpectrumEnumeration e = spec_enumerate(c, bound);
            acc.insert(e.members.begin(), e.members.end());
            inf = inf || e.has_infinity;
        }
        return {std::vector<Int>(acc.begin(), acc.end()), inf};
    }
    case SpectrumExpr::Kind::Product:
    case SpectrumExpr::Kind::Power: {
        auto fs = product_factors(a);
        // all members are >= 1, so factors above the bound never contribute
        std::set<Int> acc{Int(1)};
        bool inf = false;
        bool first = true;
        for (const SpectrumExpr* f : fs) {
            SpectrumEnumeration e = spec_enumerate(*f, bound);
            inf = inf || e.has_infinity;
            std::set<Int> next;
            if (first) {
                next.insert(e.members.begin(), e.members.end());
                first = false;
            } else {
                for (const Int& x : acc)
                    for (const Int& y : e.members) {
                        Int p = x * y;
                        if (p <= bound) next.insert(p);
                    }
            }
            acc = std::move(next);
        }
        return {std::vector<Int>(acc.begin(), acc.end()), inf};
    }
    }
    throw InternalError("spec_enumerate: unreachable");
}

bool spec_equivalent_up_to(const SpectrumExpr& a, const SpectrumExpr& b, const Int& bound) {
    SpectrumEnumeration ea = spec_enumerate(a, bound), eb = spec_enumerate(b, bound);
    return ea.has_infinity == eb.has_infinity && ea.members == eb.members;
}

SpectrumExpr abelian_spectrum(unsigned rank) {
    if (rank == 0) return SpectrumExpr::finite({ExtNat::finite(1)});
    if (rank == 1)
        return SpectrumExpr::finite({ExtNat::finite(2), ExtNat::infinity()});
    return SpectrumExpr::full();
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw FormatError("spectrum literal: expected '" + std::string(1, c) +
                              "' at offset " + std::to_string(pos));
    }
    bool eat_word(std::string_view w) {
        skip_ws();
        if (text.substr(pos, w.size()) == w) {
            pos += w.size();
            return true;
        }
        return false;
    }
    Int integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos)
            throw FormatError("spectrum literal: expected integer at offset " +
                              std::to_string(start));
        return Int(std::string(text.substr(start, pos - start)));
    }

    SpectrumExpr expr() {
        skip_ws();
        if (eat_word("full")) return SpectrumExpr::full();
        if (eat_word("prod")) return list_node(true);
        if (eat_word("pow")) {
            expect('(');
            SpectrumExpr base = expr();
            expect(',');
            Int n = integer();
            expect(')');
            if (n < 1 || n > 1000000)
                throw FormatError("spectrum literal: pow exponent out of range");
            return spec_pow(base, static_cast<unsigned>(n));
        }
        if (eat_word("union")) return list_node(false);
        if (eat('{')) return finite_set();
        throw FormatError("spectrum literal: unexpected input at offset " +
                          std::to_string(pos));
    }

    SpectrumExpr list_node(bool product) {
        expect('(');
        std::vector<SpectrumExpr> parts;
        parts.push_back(expr());
        while (eat(',')) parts.push_back(expr());
        expect(')');
        return product ? spec_product(std::move(parts)) : spec_union(std::move(parts));
    }

    SpectrumExpr finite_set() {
        std::set<ExtNat> members;
        do {
            skip_ws();
            if (eat_word("inf"))
                members.insert(ExtNat::infinity());
            else
                members.insert(ExtNat::finite(integer()));
        } while (eat(','));
        expect('}');
        return SpectrumExpr::finite(std::move(members));
    }
};

} // namespace

SpectrumExpr parse_spectrum(std::string_view text) {
    Parser p{text};
    SpectrumExpr e = p.expr();
    p.skip_ws();
    if (p.pos != text.size())
        throw FormatError("spectrum literal: trailing input at offset " +
                          std::to_string(p.pos));
    return e;
}

std::string format_spectrum(const SpectrumExpr& a) {
    switch (a.kind()) {
    case SpectrumExpr::Kind::Finite: {
        std::string s = "{";
        bool first = true;
        for (const ExtNat& v : a.members()) {
            if (!first) s += ",";
            s += v.str();
            first = false;
        }
        return s + "}";
    }
    case SpectrumExpr::Kind::Full:
        return "full";
    case SpectrumExpr::Kind::Power:
        return "pow(" + format_spectrum(a.children()[0]) + "," +
               std::to_string(a.power_exponent()) + ")";
    case SpectrumExpr::Kind::Product:
    case SpectrumExpr::Kind::Union: {
        std::string s = a.kind() == SpectrumExpr::Kind::Product ? "prod(" : "union(";
        for (std::size_t i = 0; i < a.children().size(); ++i) {
            if (i) s += ",";
            s += format_spectrum(a.children()[i]);
        }
        return s + ")";
    }
    }
    throw InternalError("format_spectrum: unreachable");
}

} // namespace nilspec
