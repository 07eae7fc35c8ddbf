#pragma once

#include <string>

#include "nilspec/bigint.hpp"
#include "nilspec/errors.hpp"

namespace nilspec {

// An element of {1, 2, 3, ...} u {inf}. Reidemeister numbers are never 0,
// so finite values below 1 are rejected at construction.
class ExtNat {
public:
    static ExtNat infinity() { return ExtNat(); }

    static ExtNat finite(Int v) {
        if (v < 1)
            throw DomainError("ExtNat: finite values must be >= 1, got " + v.str());
        ExtNat e;
        e.infinite_ = false;
        e.value_ = std::move(v);
        return e;
    }

    static ExtNat finite(long v) { return finite(Int(v)); }

    bool is_infinite() const { return infinite_; }

    const Int& value() const {
        if (infinite_)
            throw DomainError("ExtNat: infinity has no finite value");
        return value_;
    }

    bool operator==(const ExtNat& o) const {
        return infinite_ == o.infinite_ && (infinite_ || value_ == o.value_);
    }
    bool operator!=(const ExtNat& o) const { return !(*this == o); }

    // finite values by magnitude, infinity last; gives sets a stable order
    bool operator<(const ExtNat& o) const {
        if (infinite_) return false;
        if (o.infinite_) return true;
        return value_ < o.value_;
    }

    std::string str() const { return infinite_ ? "inf" : value_.str(); }

private:
    ExtNat() = default;
    bool infinite_ = true;
    Int value_;
};

// a * inf = inf for every a; otherwise ordinary integer multiplication
inline ExtNat ext_mul(const ExtNat& a, const ExtNat& b) {
    if (a.is_infinite() || b.is_infinite()) return ExtNat::infinity();
    return ExtNat::finite(a.value() * b.value());
}

} // namespace nilspec
