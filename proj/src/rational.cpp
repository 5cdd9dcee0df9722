#include "clades/rational.hpp"

#include <stdexcept>

#include "clades/errors.hpp"

namespace clades {

RationalTables build_mu_nu_exact(std::int64_t nmax) {
  if (nmax < 1) throw std::invalid_argument("build_mu_nu_exact: nmax must be >= 1");
  if (nmax > kRationalNmaxLimit) throw CapTooLargeError(nmax, kRationalNmaxLimit);
  RationalTables t;
  t.nmax = nmax;
  const auto sz = static_cast<std::size_t>(nmax + 1);
  t.mu.assign(sz, Rational(0));
  t.nu.assign(sz, Rational(0));
  t.psi.assign(sz, Rational(0));
  t.mu[1] = t.nu[1] = 1;
  Rational prefix = Rational(2) / 6;  // 2 mu_1 / (2*3)
  for (std::int64_t n = 2; n <= nmax; ++n) {
    const auto i = static_cast<std::size_t>(n);
    t.mu[i] = Rational(2, n) * (1 - t.nu[i - 1]);
    t.nu[i] = Rational(n + 1) * prefix + t.mu[i];
    prefix += 2 * t.mu[i] / Rational((n + 1) * (n + 2));
  }
  for (std::int64_t k = 2; k <= nmax; ++k) {
    const auto i = static_cast<std::size_t>(k);
    Rational cross(0);
    for (std::int64_t j = 1; j <= k - 2; ++j) {
      const Rational d =
          t.nu[static_cast<std::size_t>(j)] + t.nu[static_cast<std::size_t>(k - 1 - j)] - t.nu[i];
      cross += d * d;
    }
    const Rational edge = t.nu[i] - 1;
    t.psi[i] = cross / k + Rational(2, k) * edge * edge;
  }
  return t;
}

}  // namespace clades
