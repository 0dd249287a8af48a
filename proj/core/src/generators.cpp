#include "dikin/generators.hpp"

#include <regex>
#include <stdexcept>

#include "dikin/io.hpp"

namespace dikin {

Polytope make_cube(int n) {
  if (n < 1) throw std::invalid_argument("cube dimension must be positive");
  Matrix A(2 * n, n);
  Vector b(2 * n);
  A.topRows(n) = Matrix::Identity(n, n);
  A.bottomRows(n) = -Matrix::Identity(n, n);
  b.head(n).setZero();
  b.tail(n).setConstant(-1.0);
  return Polytope(std::move(A), std::move(b));
}

Polytope make_simplex(int n) {
  if (n < 1) throw std::invalid_argument("simplex dimension must be positive");
  Matrix A(n + 1, n);
  Vector b(n + 1);
  A.topRows(n) = Matrix::Identity(n, n);
  A.row(n).setConstant(-1.0);
  b.head(n).setZero();
  b[n] = -1.0;
  return Polytope(std::move(A), std::move(b));
}

Polytope make_cube_dup(int n, int k) {
  if (n < 1 || k < 0) {
    throw std::invalid_argument("cube_dup needs n >= 1 and k >= 0");
  }
  Matrix A(2 * n + k, n);
  Vector b(2 * n + k);
  A.topRows(n) = Matrix::Identity(n, n);
  A.middleRows(n, n) = -Matrix::Identity(n, n);
  b.head(n).setZero();
  b.segment(n, n).setConstant(-1.0);
  for (int j = 0; j < k; ++j) {
    A.row(2 * n + j) = Matrix::Identity(n, n).row(0);
    b[2 * n + j] = 0.0;
  }
  return Polytope(std::move(A), std::move(b));
}

Polytope make_random_polytope(int n, int extra, std::uint64_t seed) {
  if (n < 1 || extra < 1) {
    throw std::invalid_argument("random polytope needs n >= 1 and extra >= 1");
  }
  Rng rng(seed);
  Matrix A(2 * n + extra, n);
  Vector b(2 * n + extra);
  A.topRows(n) = Matrix::Identity(n, n);
  A.middleRows(n, n) = -Matrix::Identity(n, n);
  b.head(2 * n).setConstant(-1.0);
  for (int j = 0; j < extra; ++j) {
    Vector u(n);
    do {
      for (int i = 0; i < n; ++i) u[i] = standard_normal(rng);
    } while (u.norm() == 0.0);
    u.normalize();
    A.row(2 * n + j) = u.transpose();
    b[2 * n + j] = -(0.5 + uniform_double(rng));
  }
  return Polytope(std::move(A), std::move(b));
}

GeneratedPolytope load_polytope_source(const std::string& source) {
  static const std::regex cube_re(R"(^cube\((\d+)\)$)");
  static const std::regex simplex_re(R"(^simplex\((\d+)\)$)");
  static const std::regex dup_re(R"(^cubedup\((\d+),(\d+)\)$)");
  static const std::regex rand_re(R"(^rand\((\d+),(\d+)(?:,(\d+))?\)$)");
  std::smatch m;
  if (std::regex_match(source, m, cube_re)) {
    const int n = std::stoi(m[1]);
    return {make_cube(n), BodyKind::Cube, n, source};
  }
  if (std::regex_match(source, m, simplex_re)) {
    const int n = std::stoi(m[1]);
    return {make_simplex(n), BodyKind::Simplex, n, source};
  }
  if (std::regex_match(source, m, dup_re)) {
    const int n = std::stoi(m[1]);
    // duplicated facets change the constraint list, not the body
    return {make_cube_dup(n, std::stoi(m[2])), BodyKind::Cube, n, source};
  }
  if (std::regex_match(source, m, rand_re)) {
    const int n = std::stoi(m[1]);
    const std::uint64_t seed = m[3].matched ? std::stoull(m[3]) : 0;
    return {make_random_polytope(n, std::stoi(m[2]), seed), BodyKind::Unknown,
            n, source};
  }
  Polytope poly = load_polytope_json(source);
  return {poly, BodyKind::Unknown, static_cast<int>(poly.dimension()), source};
}

}  // namespace dikin
