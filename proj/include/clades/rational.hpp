#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace clades {

using Rational = boost::multiprecision::cpp_rational;

// The mu/nu/psi recursions in exact rational arithmetic. Denominators grow
// fast, so this mode is limited to small n; it exists to pin the floating
// tables down to rounding error.
struct RationalTables {
  std::int64_t nmax = 0;
  std::vector<Rational> mu;
  std::vector<Rational> nu;
  std::vector<Rational> psi;
};

inline constexpr std::int64_t kRationalNmaxLimit = 64;

RationalTables build_mu_nu_exact(std::int64_t nmax);  // includes psi

}  // namespace clades
