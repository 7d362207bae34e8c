#pragma once

#include "vacone/rational.hpp"

namespace vacone {

/// Minimal generators of a polyhedral cone: extreme rays (primitive integer
/// vectors, modulo the lineality space) and a lineality basis.
struct ConeGenerators {
  Mat rays;
  Mat lineality;
};

/// Converts {x in R^dim | le x <= 0, eq x = 0} to generator form using the
/// double description method with the combinatorial adjacency test.
ConeGenerators double_description(const Mat& le, const Mat& eq, std::size_t dim);

}  // namespace vacone
