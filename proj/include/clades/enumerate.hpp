#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "clades/rational.hpp"
#include "clades/tree.hpp"

namespace clades {

// Exhaustive enumeration of the split model at small n, in exact rational
// arithmetic. This is the acceptance suite's ground truth for the recursion
// tables, the F distribution, and the expected clade census.
struct EnumeratedShape {
  BinaryTree tree;
  Rational prob;
};

const std::vector<EnumeratedShape>& enumerate_shapes(int n);

Rational enum_nu(int n);
Rational enum_mu(int n);
std::map<std::int64_t, Rational> enum_f_dist(int n);
Rational enum_EZ(int n, int k);

}  // namespace clades
