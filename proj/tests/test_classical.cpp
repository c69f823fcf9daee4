#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "tpe/classical_tpe.hpp"
#include "tpe/errors.hpp"
#include "tpe/partition.hpp"

using namespace tpe;

namespace {

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> random_vector(std::size_t n, RngStream& s) {
  std::vector<double> v(n);
  for (auto& x : v) x = s.normal();
  return v;
}

PermutationFamily explicit_family(std::vector<std::vector<std::uint32_t>> images) {
  PermutationFamily f;
  for (auto& im : images) f.members.emplace_back(std::move(im));
  return f;
}

}  // namespace

TEST_CASE("f_count small values") {
  for (std::size_t n = 1; n <= 10; ++n) CHECK(f_count(n, 1) == 1);
  for (std::size_t n = 3; n <= 10; ++n) CHECK(f_count(n, 3) == 5);
  CHECK(f_count(2, 3) == 4);
  for (std::size_t n = 4; n <= 10; ++n) CHECK(f_count(n, 4) == 15);
  CHECK(bell_number(5) == 52);
}

TEST_CASE("f_count and enumerate_partitions against brute-force insertion") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 1; k <= 6; ++k) {
      const auto brute = oracle::brute_partitions(k, n);
      CHECK(f_count(n, k) == brute.size());
      const auto listed = enumerate_partitions(k, n);
      REQUIRE(listed.size() == brute.size());
      for (const auto& p : listed) {
        CHECK(p.block_id[0] == 0);
        std::uint32_t mx = 0;
        for (auto b : p.block_id) {
          CHECK(b <= mx + 1);
          mx = std::max(mx, b);
        }
        CHECK(p.block_count == mx + 1);
        CHECK(p.block_count <= n);
      }
    }
  }
}

TEST_CASE("equality_pattern is canonical") {
  const std::vector<std::uint32_t> t{5, 2, 5, 7};
  std::vector<std::uint32_t> out(4);
  equality_pattern(t, out);
  CHECK(out == std::vector<std::uint32_t>{0, 1, 0, 2});
}

TEST_CASE("apply matches the dense Kronecker assembly") {
  RngStream s(5);
  const auto fam = explicit_family({{1, 2, 0}, {0, 2, 1}});
  const ClassicalTpeOperator op(fam, 2);
  const Eigen::MatrixXd dense = oracle::dense_lk(fam, 2);
  for (int t = 0; t < 5; ++t) {
    const auto v = random_vector(9, s);
    CHECK((to_eigen(op.apply(v)) - dense * to_eigen(v)).norm() <= 1e-12);
  }
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto f = hermitian_family(4, 4, s);
    const ClassicalTpeOperator opk(f, k);
    const Eigen::MatrixXd dk = oracle::dense_lk(f, k);
    const auto v = random_vector(opk.dim(), s);
    CHECK((to_eigen(opk.apply(v)) - dk * to_eigen(v)).norm() <= 1e-12);
    std::vector<double> out(opk.dim());
    opk.apply_transpose(v, out);
    CHECK((to_eigen(out) - dk.transpose() * to_eigen(v)).norm() <= 1e-12);
  }
}

TEST_CASE("apply basics") {
  const auto id = explicit_family({{0, 1, 2, 3}});
  const ClassicalTpeOperator op(id, 1);
  const std::vector<double> v{1.0, -2.0, 3.5, 0.25};
  CHECK(op.apply(v) == v);
  RngStream s(6);
  const ClassicalTpeOperator op2(hermitian_family(5, 4, s), 2);
  const std::vector<double> ones(25, 1.0);
  for (double x : op2.apply(ones)) CHECK(x == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<double> bad(7), out(25);
  CHECK_THROWS_AS(op2.apply(bad, out), DimensionMismatch);
}

TEST_CASE("stochasticity and contraction") {
  RngStream s(11);
  for (int t = 0; t < 10; ++t) {
    const auto f = hermitian_family(6 + t, 4, s);
    const ClassicalTpeOperator op(f, 2);
    const auto v = random_vector(op.dim(), s);
    const auto w = op.apply(v);
    const double sv = std::accumulate(v.begin(), v.end(), 0.0);
    const double sw = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(std::abs(sv - sw) <= 1e-12 * std::max(1.0, std::abs(sv)) * double(op.dim()));
    CHECK(to_eigen(w).norm() <= to_eigen(v).norm() * (1 + 1e-12));
  }
}

TEST_CASE("capped dimension") {
  RngStream s(1);
  const auto f = hermitian_family(100, 4, s);
  CHECK_THROWS_AS(ClassicalTpeOperator(f, 4, 1u << 20), CapExceeded);
  CHECK_THROWS_AS(checked_power(10, 30, 1u << 24), CapExceeded);
  CHECK(checked_power(3, 4, 100) == 81);
}

TEST_CASE("trivial_basis: counts, orthonormality and stationarity") {
  const auto b21 = trivial_basis(2, 1);
  REQUIRE(b21.size() == 1);
  CHECK(b21[0][0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(b21[0][1] == doctest::Approx(1 / std::sqrt(2.0)));

  const auto b22 = trivial_basis(2, 2);
  REQUIRE(b22.size() == 2);
  // index = 2 n1 + n2: equal pairs are 0 and 3.
  CHECK(b22[0][0] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(b22[0][3] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(b22[1][1] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(b22[1][2] == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(trivial_basis(3, 3).size() == 5);

  RngStream s(12);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto basis = trivial_basis(n, k);
      CHECK(basis.size() == f_count(n, k));
      const ClassicalTpeOperator op(hermitian_family(std::max<std::size_t>(n, 2), 4, s), k);
      for (std::size_t a = 0; a < basis.size(); ++a) {
        CHECK(to_eigen(basis[a]).norm() == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t b = a + 1; b < basis.size(); ++b) CHECK(std::abs(to_eigen(basis[a]).dot(to_eigen(basis[b]))) <= 1e-14);
        CHECK((to_eigen(op.apply(basis[a])) - to_eigen(basis[a])).norm() <= 1e-12);
      }
    }
  }
}

TEST_CASE("project_out leaves a vector orthogonal to the trivial basis") {
  RngStream s(13);
  const PartitionClasses classes(4, 3);
  auto v = random_vector(classes.dim(), s);
  classes.project_out(v);
  for (const auto& u : classes.vectors()) CHECK(std::abs(to_eigen(u).dot(to_eigen(v))) <= 1e-12);
}

TEST_CASE("unit multiplicity equals the tuple orbit count") {
  RngStream s(14);
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 3 + t % 5;
    const std::size_t k = 1 + t % 3;
    const auto f = hermitian_family(n, 4, s);
    const ClassicalTpeOperator op(f, k);
    const auto m = unit_multiplicity(op, 1e-6);
    CHECK(m.dense);
    CHECK(m.count == oracle::tuple_orbits(f, k));
  }
  const auto f4 = hermitian_family(4, 4, s);
  if (oracle::tuple_orbits(f4, 2) == 2) CHECK(unit_multiplicity(ClassicalTpeOperator(f4, 2), 1e-6).count == 2);
}

TEST_CASE("structural unit multiplicity route") {
  RngStream s(15);
  const auto f = hermitian_family(40, 4, s);
  const ClassicalTpeOperator op(f, 2);
  const auto m = unit_multiplicity(op, 1e-6, 100, 3);
  CHECK_FALSE(m.dense);
  CHECK(m.count == 2);
  CHECK(m.certified == (oracle::tuple_orbits(f, 2) == 2));
}

TEST_CASE("lambda_estimate against dense eigenvalues") {
  RngStream s(16);
  for (int t = 0; t < 6; ++t) {
    const std::size_t n = 3 + t;
    const std::size_t k = 1 + t % 2;
    const auto f = hermitian_family(n, 4, s);
    const ClassicalTpeOperator op(f, k);
    // Oracle: spectrum of the dense matrix with the f_count largest unit
    // eigenvalues removed.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::dense_lk(f, k));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end());
    ev.resize(ev.size() - f_count(n, k));
    double expect = 0.0;
    for (double x : ev) expect = std::max(expect, std::abs(x));

    for (auto method : {SolverMethod::power, SolverMethod::lanczos}) {
      SolverOptions o;
      o.oracle = Oracle::iterative;
      o.method = method;
      o.tol = 1e-10;
      const auto r = lambda_estimate(op, o, s);
      CHECK(r.converged);
      CHECK(r.lambda == doctest::Approx(expect).epsilon(1e-8));
    }
    SolverOptions d;
    d.oracle = Oracle::dense;
    CHECK(lambda_estimate(op, d, s).lambda == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("lambda_estimate edge cases") {
  RngStream s(17);
  const auto id = explicit_family({{0, 1, 2}, {0, 1, 2}});
  auto idh = id;
  idh.hermitian = true;
  SolverOptions o;
  const auto r = lambda_estimate(ClassicalTpeOperator(idh, 1), o, s);
  CHECK(r.lambda == doctest::Approx(1.0));
  CHECK(r.lambda_h == doctest::Approx(1.0));
  CHECK_THROWS_AS(lambda_estimate(ClassicalTpeOperator(id, 1), o, s), NotHermitian);
  o.mode = SpectralMode::singular;
  CHECK(lambda_estimate(ClassicalTpeOperator(id, 1), o, s).lambda == doctest::Approx(1.0));
  CHECK(ramanujan_reference(4) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("monotonicity in k") {
  RngStream s(18);
  for (int t = 0; t < 5; ++t) {
    const auto f = hermitian_family(7, 4, s);
    SolverOptions o;
    const double l1 = lambda_estimate(ClassicalTpeOperator(f, 1), o, s).lambda;
    const double l2 = lambda_estimate(ClassicalTpeOperator(f, 2), o, s).lambda;
    const double l3 = lambda_estimate(ClassicalTpeOperator(f, 3), o, s).lambda;
    CHECK(l1 <= l2 + 1e-6);
    CHECK(l2 <= l3 + 1e-6);
  }
}

TEST_CASE("singular mode on a non-Hermitian family matches dense SVD") {
  RngStream s(19);
  PermutationFamily f;
  for (int i = 0; i < 3; ++i) f.members.push_back(random_permutation(6, s));
  const ClassicalTpeOperator op(f, 2);
  Eigen::MatrixXd m = oracle::dense_lk(f, 2);
  const auto basis = trivial_basis(6, 2);
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(36, 36);
  for (const auto& u : basis) proj -= to_eigen(u) * to_eigen(u).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj * m * proj);
  SolverOptions o;
  o.mode = SpectralMode::singular;
  o.oracle = Oracle::iterative;
  o.tol = 1e-10;
  CHECK(lambda_estimate(op, o, s).lambda == doctest::Approx(svd.singularValues()[0]).epsilon(1e-7));
}
