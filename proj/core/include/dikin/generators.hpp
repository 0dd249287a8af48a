#pragma once

#include <cstdint>
#include <string>

#include "dikin/polytope.hpp"
#include "dikin/rng.hpp"

namespace dikin {

/// Geometry tag carried next to a generated polytope so diagnostics can look
/// up exact reference marginals where they are known.
enum class BodyKind {
  Cube,     // [0,1]^n
  Simplex,  // {x >= 0, sum x <= 1}
  Unknown,  // loaded from file or randomly generated
};

struct GeneratedPolytope {
  Polytope poly;
  BodyKind body;
  int dim;
  std::string source;  // the generator expression or file path
};

/// Unit cube [0,1]^n as 2n halfspaces.
Polytope make_cube(int n);

/// Standard simplex {x >= 0, sum_i x_i <= 1} as n+1 halfspaces.
Polytope make_simplex(int n);

/// Unit cube with the facet {x_1 >= 0} repeated k extra times. The body is
/// still [0,1]^n but the constraint description has m = 2n + k rows, which
/// drives the log-barrier metric's symmetry parameter up with m while
/// leaving the weighted metric's parameter essentially flat.
Polytope make_cube_dup(int n, int k);

/// Random bounded polytope: the box [-1,1]^n plus `extra` random halfspaces
/// {u . x >= -c}, u uniform on the sphere, c in [0.5, 1.5], so the origin
/// stays strictly interior.
Polytope make_random_polytope(int n, int extra, std::uint64_t seed);

/// Parses "cube(N)", "simplex(N)", "cubedup(N,K)", "rand(N,EXTRA[,SEED])"
/// or, failing those, treats the string as a path to a polytope JSON file.
GeneratedPolytope load_polytope_source(const std::string& source);

}  // namespace dikin
