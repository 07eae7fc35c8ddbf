#include <doctest.h>

#include "nilspec/rng.hpp"
#include "nilspec/spectrum.hpp"
#include "oracles.hpp"

using namespace nilspec;

namespace {

SpectrumExpr fin(std::initializer_list<long> vals, bool with_inf = false) {
    std::set<ExtNat> s;
    for (long v : vals) s.insert(ExtNat::finite(v));
    if (with_inf) s.insert(ExtNat::infinity());
    return SpectrumExpr::finite(std::move(s));
}

std::set<ExtNat> members_of(const SpectrumExpr& e, long bound) {
    SpectrumEnumeration en = spec_enumerate(e, Int(bound));
    std::set<ExtNat> s;
    for (const Int& v : en.members) s.insert(ExtNat::finite(v));
    if (en.has_infinity) s.insert(ExtNat::infinity());
    return s;
}

std::set<ExtNat> clip(const std::set<ExtNat>& s, long bound) {
    std::set<ExtNat> out;
    for (const ExtNat& v : s)
        if (v.is_infinite() || v.value() <= bound) out.insert(v);
    return out;
}

} // namespace

TEST_CASE("ext_mul") {
    CHECK(ext_mul(ExtNat::finite(3), ExtNat::infinity()) == ExtNat::infinity());
    CHECK(ext_mul(ExtNat::finite(2), ExtNat::finite(3)) == ExtNat::finite(6));
    CHECK(ext_mul(ExtNat::infinity(), ExtNat::infinity()) == ExtNat::infinity());
    CHECK_THROWS_AS(ExtNat::finite(0), DomainError);
}

TEST_CASE("product and power examples") {
    SpectrumExpr two_inf = fin({2}, true);
    SpectrumExpr sq = spec_pow(two_inf, 2);
    CHECK(members_of(sq, 100) ==
          std::set<ExtNat>{ExtNat::finite(4), ExtNat::infinity()});

    // {1} is a multiplicative identity
    SpectrumExpr a = fin({3, 7});
    CHECK(spec_equivalent_up_to(spec_product({fin({1}), a}), a, Int(1000)));

    // prod({2,inf}, full) contains 6 but not 1
    SpectrumExpr p = spec_product({two_inf, SpectrumExpr::full()});
    CHECK(spec_contains(p, ExtNat::finite(6)));
    CHECK(!spec_contains(p, ExtNat::finite(1)));
    CHECK(spec_contains(p, ExtNat::infinity()));

    CHECK(members_of(spec_pow(fin({2, 3}), 2), 100) ==
          std::set<ExtNat>{ExtNat::finite(4), ExtNat::finite(6), ExtNat::finite(9)});

    // normalization collapses trivial wrappers
    CHECK(spec_pow(a, 1).kind() == SpectrumExpr::Kind::Finite);
    CHECK(spec_product({a}).kind() == SpectrumExpr::Kind::Finite);
    CHECK_THROWS_AS(spec_product({}), DomainError);
    CHECK_THROWS_AS(spec_pow(a, 0), DomainError);
}

TEST_CASE("union fold examples") {
    CHECK(members_of(spec_union_fold(fin({2}, true), 2), 100) ==
          std::set<ExtNat>{ExtNat::finite(2), ExtNat::finite(4), ExtNat::infinity()});
    CHECK(members_of(spec_union_fold(fin({3}), 3), 100) ==
          std::set<ExtNat>{ExtNat::finite(3), ExtNat::finite(9), ExtNat::finite(27)});
    SpectrumExpr a = fin({5}, true);
    CHECK(spec_equivalent_up_to(spec_union_fold(a, 1), a, Int(100)));
    CHECK_THROWS_AS(spec_union_fold(a, 0), DomainError);
}

TEST_CASE("membership examples") {
    CHECK(spec_contains(SpectrumExpr::full(), ExtNat::finite(17)));
    CHECK(spec_contains(SpectrumExpr::full(), ExtNat::infinity()));
    SpectrumExpr p = spec_product({fin({2}, true), fin({2}, true)});
    CHECK(!spec_contains(p, ExtNat::finite(2)));
    CHECK(spec_contains(p, ExtNat::finite(4)));
    CHECK(spec_contains(p, ExtNat::infinity()));
}

TEST_CASE("enumerate examples") {
    SpectrumEnumeration full5 = spec_enumerate(SpectrumExpr::full(), Int(5));
    CHECK(full5.members == IntVec{1, 2, 3, 4, 5});
    CHECK(full5.has_infinity);

    SpectrumEnumeration sq = spec_enumerate(spec_pow(fin({2}, true), 2), Int(10));
    CHECK(sq.members == IntVec{4});
    CHECK(sq.has_infinity);

    SpectrumEnumeration u = spec_enumerate(spec_union({fin({2}), fin({6})}), Int(4));
    CHECK(u.members == IntVec{2});
    CHECK(!u.has_infinity);
}

TEST_CASE("membership of products agrees with brute-force enumeration") {
    Rng rng(71);
    for (int trial = 0; trial < 60; ++trial) {
        std::set<ExtNat> sa, sb;
        for (int i = rng.range(1, 4); i > 0; --i) sa.insert(ExtNat::finite(rng.range(1, 9)));
        for (int i = rng.range(1, 4); i > 0; --i) sb.insert(ExtNat::finite(rng.range(1, 9)));
        if (rng.coin()) sa.insert(ExtNat::infinity());
        if (rng.coin()) sb.insert(ExtNat::infinity());
        SpectrumExpr prod =
            spec_product({SpectrumExpr::finite(sa), SpectrumExpr::finite(sb)});
        std::set<ExtNat> brute = oracles::product_set({sa, sb});
        for (long m = 1; m <= 100; ++m)
            CHECK(spec_contains(prod, ExtNat::finite(m)) ==
                  (brute.count(ExtNat::finite(m)) > 0));
        CHECK(spec_contains(prod, ExtNat::infinity()) ==
              (brute.count(ExtNat::infinity()) > 0));
        // bounded enumeration sees exactly the same set
        CHECK(members_of(prod, 81) == clip(brute, 81));
    }
}

TEST_CASE("product is associative and commutative at membership level") {
    SpectrumExpr a = fin({2, 5}), b = fin({3}, true), c = fin({1, 7});
    SpectrumExpr left = spec_product({spec_product({a, b}), c});
    SpectrumExpr right = spec_product({a, spec_product({b, c})});
    SpectrumExpr swapped = spec_product({c, b, a});
    CHECK(spec_equivalent_up_to(left, right, Int(1000)));
    CHECK(spec_equivalent_up_to(left, swapped, Int(1000)));
}

TEST_CASE("power equals nested products") {
    Rng rng(73);
    for (int trial = 0; trial < 20; ++trial) {
        std::set<ExtNat> s;
        for (int i = rng.range(1, 3); i > 0; --i) s.insert(ExtNat::finite(rng.range(1, 6)));
        if (rng.coin()) s.insert(ExtNat::infinity());
        SpectrumExpr a = SpectrumExpr::finite(s);
        unsigned n = unsigned(rng.range(1, 3));
        SpectrumExpr p = spec_pow(a, n);
        SpectrumExpr nested = spec_product(std::vector<SpectrumExpr>(n, a));
        CHECK(spec_equivalent_up_to(p, nested, Int(500)));
        std::set<ExtNat> brute = oracles::power_set(s, n);
        CHECK(members_of(p, 500) == clip(brute, 500));
    }
}

TEST_CASE("infinity is in a product iff some factor has it") {
    CHECK(spec_contains(spec_product({fin({2}), fin({3}, true)}), ExtNat::infinity()));
    CHECK(!spec_contains(spec_product({fin({2}), fin({3})}), ExtNat::infinity()));
    CHECK(spec_contains(spec_product({fin({2}), SpectrumExpr::full()}), ExtNat::infinity()));
}

TEST_CASE("abelian spectra round-trip through enumerate") {
    SpectrumEnumeration rank1 = spec_enumerate(abelian_spectrum(1), Int(10));
    CHECK(rank1.members == IntVec{2});
    CHECK(rank1.has_infinity);
    SpectrumEnumeration rank2 = spec_enumerate(abelian_spectrum(2), Int(6));
    CHECK(rank2.members == IntVec{1, 2, 3, 4, 5, 6});
    CHECK(rank2.has_infinity);
    SpectrumEnumeration rank0 = spec_enumerate(abelian_spectrum(0), Int(5));
    CHECK(rank0.members == IntVec{1});
    CHECK(!rank0.has_infinity);
}

TEST_CASE("literal parsing and formatting") {
    CHECK(format_spectrum(parse_spectrum("{2,inf}")) == "{2,inf}");
    CHECK(format_spectrum(parse_spectrum(" { 12 , 2 , inf } ")) == "{2,12,inf}");
    CHECK(format_spectrum(parse_spectrum("full")) == "full");
    CHECK(format_spectrum(parse_spectrum("prod({2,inf},{2,inf})")) ==
          "prod({2,inf},{2,inf})");
    CHECK(format_spectrum(parse_spectrum("pow( {2,3} , 3 )")) == "pow({2,3},3)");
    CHECK(format_spectrum(parse_spectrum("union({2},full)")) == "union({2},full)");

    CHECK_THROWS_AS(parse_spectrum("{}"), FormatError);
    CHECK_THROWS_AS(parse_spectrum("pow({2})"), FormatError);
    CHECK_THROWS_AS(parse_spectrum("{2,inf} trailing"), FormatError);
    CHECK_THROWS_AS(parse_spectrum("{0}"), DomainError); // members must be >= 1

    // parse-format round trip on a nested literal
    std::string lit = "union(prod({2,inf},pow({3},2)),full)";
    CHECK(format_spectrum(parse_spectrum(lit)) == lit);
}
