#pragma once

#include <string>
#include <vector>

#include "brute.hpp"
#include "drinfeld/module.hpp"

namespace drinfeld::testing {

inline FunctionField rational_field(int p, const std::string& var = "t", std::int64_t ext = 1, int k = 1) {
  return FunctionField{FiniteField::create(p, k), var, ext};
}

inline DrinfeldModule module(int p, const std::vector<std::string>& coeffs, const std::string& var = "t") {
  return DrinfeldModule::parse(rational_field(p, var), coeffs);
}

inline DrinfeldModule carlitz(int p) { return module(p, {"t", "1"}); }

/// Random element y = n/d with deg n, deg d <= h (so Weil height <= h).
inline RatFunc random_ratfunc(const FieldRef& f, int h, Rng& rng) {
  return RatFunc::make(random_poly(f, static_cast<int>(rng.below(h + 1)), rng),
                       random_nonzero_poly(f, static_cast<int>(rng.below(h + 1)), rng));
}

}  // namespace drinfeld::testing
