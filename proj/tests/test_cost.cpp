#include <cmath>
#include <random>

#include "doctest.h"
#include "spod/cost.hpp"
#include "spod/shift_fem.hpp"
#include "support.hpp"

using namespace spod;
using namespace spod::testing;

namespace {

Decomposition moving_frame(const SpatialGrid& g, const TimeGrid& t, const Vector& mode, const Vector& path,
                           const Matrix& coeffs) {
  Matrix modes = mode.transpose();
  return Decomposition{{Frame{PathRepr::nodal(path), modes, coeffs}}, g, t};
}

double half_norm_squared(const SnapshotSet& z) {
  const auto f0 = gram_F(0.0, z.grid);
  double acc = 0.0;
  for (int k = 0; k < z.nt(); ++k) {
    const Vector zk = z.values.row(k).transpose();
    acc += z.tgrid.w(k) * zk.dot(apply_gram(f0, zk));
  }
  return 0.5 * acc;
}

}  // namespace

TEST_CASE("reconstruct") {
  const SpatialGrid g(8, 1.0);
  const auto t = make_uniform_time_grid(5, 1.0);
  std::mt19937_64 rng(1);
  const Vector mode = random_vector(rng, 8);
  SUBCASE("fixed frame, unit coefficients") {
    const auto d = moving_frame(g, t, mode, Vector::Zero(6), Matrix::Ones(6, 1));
    const auto rec = reconstruct(d);
    for (int k = 0; k < 6; ++k) CHECK((rec.values.row(k).transpose() - mode).norm() == 0.0);
  }
  SUBCASE("zero coefficients") {
    const auto d = moving_frame(g, t, mode, Vector::LinSpaced(6, 0.0, 0.3), Matrix::Zero(6, 1));
    CHECK(reconstruct(d).values.isZero(0.0));
  }
  SUBCASE("moving unit spike") {
    Vector e = Vector::Zero(8);
    e[0] = 1.0;
    Vector path(6);
    for (int k = 0; k < 6; ++k) path[k] = k * g.h();
    const auto rec = reconstruct(moving_frame(g, t, e, path, Matrix::Ones(6, 1)));
    for (int k = 0; k < 6; ++k) {
      CHECK(rec.values(k, k) == 1.0);
      CHECK(rec.values.row(k).sum() == 1.0);
    }
  }
}

TEST_CASE("eval_cost") {
  std::mt19937_64 rng(2);
  SUBCASE("exact reconstruction gives zero") {
    const SpatialGrid g(16, 2.0);
    const auto t = make_uniform_time_grid(10, 1.0);
    Vector path(11);
    for (int k = 0; k <= 10; ++k) path[k] = (2 * k - 5) * g.h();
    const auto d = moving_frame(g, t, random_vector(rng, 16), path, random_matrix(rng, 11, 1));
    const SnapshotSet z = reconstruct(d);
    const double nz = 2.0 * half_norm_squared(z);
    CHECK(eval_cost(z, d) <= 1e-12 * nz);
  }
  SUBCASE("zero coefficients give half the squared norm") {
    auto [z, d] = random_instance(rng, {});
    for (auto& f : d.frames) f.coeffs.setZero();
    CHECK(eval_cost(z, d) == doctest::Approx(half_norm_squared(z)).epsilon(1e-13));
  }
  SUBCASE("matches the residual quadrature oracle") {
    for (int trial = 0; trial < 5; ++trial) {
      InstanceShape s;
      s.n = 16;
      s.m = 8;
      s.ranks = trial % 2 ? std::vector<int>{2, 1} : std::vector<int>{3};
      s.polynomial = trial == 3;
      auto [z, d] = random_instance(rng, s);
      CHECK(std::abs(eval_cost(z, d) - residual_quadrature_cost(z, d)) < 1e-8);
    }
  }
  SUBCASE("relative accuracy near an exact reconstruction") {
    // two frames on whole cells, data exact; then both paths nudged off the grid
    const SpatialGrid g(24, 1.0);
    const auto t = make_uniform_time_grid(6, 1.0);
    Decomposition d{{}, g, t};
    for (int r = 0; r < 2; ++r) {
      Vector path(7);
      for (int k = 0; k <= 6; ++k) path[k] = (r ? -k : 2 * k) * g.h();
      d.frames.push_back(Frame{PathRepr::nodal(path), random_matrix(rng, 1, 24), random_matrix(rng, 7, 1)});
    }
    const SnapshotSet z = reconstruct(d);
    for (double delta : {1e-4, 1e-6, 1e-8}) {
      Decomposition moved = d;
      moved.frames[0].path.parameters().array() += delta * g.h();
      moved.frames[1].path.parameters().array() -= 0.7 * delta * g.h();
      const double oracle = residual_quadrature_cost(z, moved, 200);
      CHECK(eval_cost(z, moved) == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
  SUBCASE("grid mismatch") {
    auto [z, d] = random_instance(rng, {});
    SnapshotSet other(SpatialGrid(32, 2.0), z.tgrid, z.values);
    CHECK_THROWS_AS(eval_cost(other, d), DimensionError);
    CHECK_THROWS_AS(eval_cost_gradient(other, d), DimensionError);
  }
}

TEST_CASE("eval_cost_gradient") {
  std::mt19937_64 rng(3);
  const VariableSet all;
  SUBCASE("vanishes at an exact reconstruction") {
    const SpatialGrid g(16, 1.0);
    const auto t = make_uniform_time_grid(10, 1.0);
    Vector path(11);
    for (int k = 0; k <= 10; ++k) path[k] = k * g.h();
    const auto d = moving_frame(g, t, random_vector(rng, 16), path, random_matrix(rng, 11, 1));
    const auto z = reconstruct(d);
    const auto cg = eval_cost_gradient(z, d);
    CHECK(pack_gradient(cg, d, all).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("zero coefficients, single frame") {
    InstanceShape s;
    s.ranks = {2};
    auto [z, d] = random_instance(rng, s);
    d.frames[0].coeffs.setZero();
    const auto cg = eval_cost_gradient(z, d);
    const Vector p = d.frames[0].path.evaluate(d.tgrid);
    for (int k = 0; k < d.tgrid.size(); ++k) {
      const Vector zk = z.values.row(k).transpose();
      const Vector fz = apply_gram_transpose(gram_F(p[k], d.grid), zk);
      for (int i = 0; i < 2; ++i) {
        const double expect = -d.tgrid.w(k) * fz.dot(d.frames[0].modes.row(i).transpose());
        CHECK(cg.frames[0].coeffs(k, i) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
    CHECK(cg.frames[0].path.isZero(0.0));
    CHECK(cg.frames[0].modes.isZero(0.0));
  }
  SUBCASE("finite differences, n=32, m=20, r=2, two frames") {
    auto [z, d] = random_instance(rng, {});
    const auto cg = eval_cost_gradient(z, d);
    CHECK(cg.value == doctest::Approx(eval_cost(z, d)).epsilon(1e-13));
    const Vector analytic = pack_gradient(cg, d, all);
    CHECK(analytic.size() == 2 * (2 * 21 + 21 + 2 * 32));
    CHECK(max_relative_deviation(analytic, fd_gradient(z, d, all)) <= 1e-5);
  }
  SUBCASE("finite differences, polynomial paths") {
    InstanceShape s;
    s.n = 16;
    s.m = 10;
    s.ranks = {1, 3};
    s.polynomial = true;
    s.degree = 3;
    auto [z, d] = random_instance(rng, s);
    const Vector analytic = pack_gradient(eval_cost_gradient(z, d), d, all);
    CHECK(max_relative_deviation(analytic, fd_gradient(z, d, all)) <= 1e-5);
  }
  SUBCASE("polynomial path gradient is the Vandermonde pull-back") {
    InstanceShape s;
    s.ranks = {2};
    s.polynomial = true;
    s.degree = 4;
    auto [z, d] = random_instance(rng, s);
    Decomposition nodal = d;
    nodal.frames[0].path = PathRepr::nodal(d.frames[0].path.evaluate(d.tgrid));
    const Vector gp = eval_cost_gradient(z, d).frames[0].path;
    const Vector gn = eval_cost_gradient(z, nodal).frames[0].path;
    Matrix V(d.tgrid.size(), 5);
    for (int k = 0; k < d.tgrid.size(); ++k)
      for (int j = 0; j < 5; ++j) V(k, j) = std::pow(d.tgrid.t(k), j);
    const Vector expect = V.transpose() * gn;
    CHECK((gp - expect).cwiseAbs().maxCoeff() <= 1e-13 * std::max(1.0, expect.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("translation covariance") {
  std::mt19937_64 rng(4);
  auto [z, d] = random_instance(rng, {});
  const double base = eval_cost(z, d);
  for (int cells : {1, 5, -3, 32}) {
    const double delta = cells * d.grid.h();
    Decomposition moved = d;
    for (auto& f : moved.frames) f.path.parameters().array() += delta;
    SnapshotSet zs = z;
    for (int k = 0; k < z.nt(); ++k)
      zs.values.row(k) = shift_field(delta, Vector(z.values.row(k).transpose()), z.grid).transpose();
    CHECK(std::abs(eval_cost(zs, moved) - base) <= 1e-12 * std::max(1.0, base));
  }
}

TEST_CASE("threaded evaluation") {
  std::mt19937_64 rng(5);
  auto [z, d] = random_instance(rng, {});
  const auto a = eval_cost_gradient(z, d, {1});
  const auto b = eval_cost_gradient(z, d, {1});
  CHECK(a.value == b.value);
  const Vector ga = pack_gradient(a, d, {});
  CHECK(ga == pack_gradient(b, d, {}));
  for (int threads : {2, 3, 8, 64}) {
    const auto c = eval_cost_gradient(z, d, {threads});
    CHECK(std::abs(c.value - a.value) <= 1e-13 * std::abs(a.value));
    CHECK((pack_gradient(c, d, {}) - ga).cwiseAbs().maxCoeff() <= 1e-13 * ga.cwiseAbs().maxCoeff());
    CHECK(std::abs(eval_cost(z, d, {threads}) - a.value) <= 1e-13 * std::abs(a.value));
  }
}

TEST_CASE("discrete norms") {
  const auto t = make_uniform_time_grid(4, 2.0);
  SUBCASE("coefficient norm") {
    CHECK(coeff_norm(Vector::Ones(5), t) == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("path H1 norm of a line") {
    // p = t: L2 part int_0^2 t^2 (trapezoid) plus derivative part 2
    const Vector p = Vector::LinSpaced(5, 0.0, 2.0);
    double l2 = 0;
    for (int k = 0; k < 5; ++k) l2 += t.w(k) * p[k] * p[k];
    CHECK(path_h1_norm(p, t) == doctest::Approx(std::sqrt(l2 + 2.0)).epsilon(1e-14));
  }
  SUBCASE("mode H1 norm of a constant") {
    const SpatialGrid g(10, 2.0);
    CHECK(mode_h1_norm(Vector::Constant(10, 3.0), g) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("penalty") {
  const SpatialGrid g(10, 1.0);
  const auto t = make_uniform_time_grid(4, 1.0);
  SUBCASE("all norms within the bound") {
    Decomposition d{{Frame{PathRepr::nodal(Vector::Zero(5)), Matrix::Constant(1, 10, 0.5), Matrix::Ones(5, 1)}}, g, t};
    CHECK(penalty_value(d, 10.0) == 0.0);
    CHECK(is_admissible(d, 10.0));
  }
  SUBCASE("one mode exceeding by one") {
    // constant mode c has H1 norm c; choose C = 2, c = 3
    Decomposition d{{Frame{PathRepr::nodal(Vector::Zero(5)), Matrix::Constant(1, 10, 3.0), Matrix::Ones(5, 1)}}, g, t};
    CHECK(penalty_value(d, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(is_admissible(d, 2.0));
  }
  SUBCASE("invalid bound or coefficient") {
    std::mt19937_64 rng(6);
    auto [z, d] = random_instance(rng, {});
    CHECK_THROWS_AS(penalty_value(d, 0.0), InvalidArgument);
    CHECK_THROWS_AS(eval_penalized_cost(z, d, 1.0, -1.0), InvalidArgument);
  }
  SUBCASE("penalized cost") {
    std::mt19937_64 rng(7);
    auto [z, d] = random_instance(rng, {});
    const double j = eval_cost(z, d);
    CHECK(eval_penalized_cost(z, d, 1.0, 0.0) == j);
    CHECK(eval_penalized_cost(z, d, 100.0, 10.0) == j);
    const double pen = penalty_value(d, 0.5);
    REQUIRE(pen > 0.0);
    double prev = j;
    for (double lambda : {0.1, 1.0, 10.0}) {
      const double v = eval_penalized_cost(z, d, 0.5, lambda);
      CHECK(v > prev);
      CHECK(v == doctest::Approx(j + lambda * pen).epsilon(1e-14));
      prev = v;
    }
  }
  SUBCASE("scaling a mode past the bound increases the penalty") {
    std::mt19937_64 rng(8);
    auto [z, d] = random_instance(rng, {});
    const double C = 1.0;
    double prev = penalty_value(d, C);
    for (double s : {2.0, 3.0, 5.0}) {
      Decomposition e = d;
      e.frames[0].modes.row(0) *= s;
      const double v = penalty_value(e, C);
      CHECK(v > prev);
      prev = v;
    }
  }
}
