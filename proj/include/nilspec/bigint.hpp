#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace nilspec {

// All group/lattice arithmetic is arbitrary precision. Fixed-width integers
// would silently overflow on determinants of even modest automorphisms.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

} // namespace nilspec
