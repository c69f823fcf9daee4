#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tpe/channel.hpp"
#include "tpe/classical_tpe.hpp"
#include "tpe/errors.hpp"
#include "tpe/mixing.hpp"

using namespace tpe;

namespace {

Eigen::MatrixXcd random_hermitian(std::size_t n, RngStream& s) {
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double re = s.normal();
      m(i, j) = cplx(re, s.normal());
    }
  }
  return m + m.adjoint();
}

std::vector<double> sorted_eigs(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  return oracle::sorted_real({es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()});
}

}  // namespace

TEST_CASE("sign expander structure") {
  RngStream s(1);
  const auto f = hermitian_family(10, 4, s);
  const auto ch = sign_expander(f, s.split(5));
  CHECK(ch.tag == ChannelTag::sign);
  CHECK(ch.hermitian);
  CHECK_NOTHROW(ch.validate());
  CHECK(trace_preservation_residual(ch) <= 1e-12);
  CHECK(unitality_residual(ch) <= 1e-12);
  const double sd = std::sqrt(4.0);
  for (std::size_t i = 0; i < 2; ++i) {
    const Eigen::MatrixXcd a = ch.kraus[i] * sd;
    const Eigen::MatrixXcd b = ch.kraus[i + 2] * sd;
    CHECK(b == Eigen::MatrixXcd(a.adjoint()));
  }
  auto nh = f;
  nh.hermitian = false;
  nh.members.pop_back();
  CHECK_THROWS_AS(sign_expander(nh, s), InvalidArgument);
}

TEST_CASE("sign channel diagonal sector equals L_1") {
  RngStream s(2);
  for (std::size_t n : {4, 9, 16, 33, 64}) {
    const auto f = hermitian_family(n, 4, s);
    const auto ch = sign_expander(f, s.split(n));
    // Independent route: push each basis projector through channel_apply.
    Eigen::MatrixXd t(n, n);
    for (std::size_t l = 0; l < n; ++l) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
      e(l, l) = 1.0;
      const auto out = channel_apply(ch, e);
      for (std::size_t j = 0; j < n; ++j) t(j, l) = out(j, j).real();
    }
    CHECK((t - diagonal_sector_matrix(ch)).cwiseAbs().maxCoeff() <= 1e-14);
    const auto a = sorted_eigs(t);
    const auto b = sorted_eigs(oracle::dense_lk(f, 1));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-8);
  }
}

TEST_CASE("sign channel preserves diagonal and off-diagonal sectors exactly") {
  RngStream s(3);
  const auto f = hermitian_family(8, 4, s);
  const auto ch = sign_expander(f, s);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(8, 8);
  for (int i = 0; i < 8; ++i) d(i, i) = s.normal();
  const auto od = channel_apply(ch, d);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (i != j) CHECK(od(i, j) == cplx(0.0, 0.0));
  Eigen::MatrixXcd off = random_hermitian(8, s);
  for (int i = 0; i < 8; ++i) off(i, i) = 0.0;
  const auto oo = channel_apply(ch, off);
  for (int i = 0; i < 8; ++i) CHECK(oo(i, i) == cplx(0.0, 0.0));
}

TEST_CASE("sign channel diagonal action equals the classical operator") {
  RngStream s(4);
  const auto f = hermitian_family(7, 4, s);
  const auto ch = sign_expander(f, s);
  const ClassicalTpeOperator op(f, 1);
  std::vector<double> p(7);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(7, 7);
  for (int i = 0; i < 7; ++i) {
    p[i] = s.uniform01();
    rho(i, i) = p[i];
  }
  const auto out = channel_apply(ch, rho);
  const auto q = op.apply(p);
  for (int i = 0; i < 7; ++i) CHECK(std::abs(out(i, i).real() - q[i]) <= 1e-12);
}

TEST_CASE("z-phase construction") {
  CHECK(phi2_z_overlap(4) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  const auto z = z_phase_matrix(4);
  CHECK(std::abs(z(1, 1) - std::polar(1.0, std::numbers::pi / 2)) <= 1e-15);
  CHECK(std::abs(z(0, 0) - cplx(1.0, 0.0)) <= 1e-15);

  RngStream s(5);
  const auto f = hermitian_family(6, 4, s);
  const auto ch = z_phase_expander(f, 1.0, false);
  REQUIRE(ch.kraus.size() == 5);
  // p = 1/2: the permutation weights are sqrt(p/D).
  CHECK(std::abs(ch.kraus[0].cwiseAbs().maxCoeff() - std::sqrt(0.5 / 4.0)) <= 1e-15);
  CHECK(std::abs(ch.kraus[4].cwiseAbs().maxCoeff() - std::sqrt(0.5)) <= 1e-15);
  CHECK(trace_preservation_residual(ch) <= 1e-12);
  CHECK_FALSE(ch.hermitian);
  const auto hv = z_phase_expander(f, 0.3, true);
  CHECK(hv.kraus.size() == 6);
  CHECK(hv.hermitian);
  CHECK(trace_preservation_residual(hv) <= 1e-12);
  CHECK_THROWS_AS(z_phase_expander(f, 0.0, false), InvalidArgument);
  CHECK_THROWS_AS(z_phase_expander(f, 1.5, false), InvalidArgument);
}

TEST_CASE("channel_apply contracts") {
  RngStream s(6);
  const auto uf = hermitian_unitary_family(4, 4, s);
  const auto mix = unitary_mixture(uf);
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  CHECK((channel_apply(mix, mixed) - mixed).cwiseAbs().maxCoeff() <= 1e-14);
  const auto h = random_hermitian(4, s);
  const auto out = channel_apply(mix, h);
  CHECK(std::abs(out.trace() - h.trace()) <= 1e-10);
  CHECK(out == Eigen::MatrixXcd(out.adjoint()));
  // Kraus form against the explicit mixture (1/D) sum U rho U^dagger.
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
  for (const auto& u : uf.members) expect += u * h * u.adjoint();
  expect /= 4.0;
  CHECK((out - expect).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(channel_apply(mix, Eigen::MatrixXcd::Identity(3, 3)), DimensionMismatch);
}

TEST_CASE("superoperator agrees with channel_apply and its adjoint") {
  RngStream s(7);
  const auto f = hermitian_family(5, 4, s);
  const auto ch = z_phase_expander(f, 0.4, false);
  const Eigen::MatrixXcd sup = dense_superoperator(ch);
  const auto h = random_hermitian(5, s);
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> hr = h;
  const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(hr.data(), 25);
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out = channel_apply(ch, h);
  CHECK((sup * v - Eigen::Map<const Eigen::VectorXcd>(out.data(), 25)).norm() <= 1e-12);
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> adj = channel_apply_adjoint(ch, h);
  CHECK((sup.adjoint() * v - Eigen::Map<const Eigen::VectorXcd>(adj.data(), 25)).norm() <= 1e-12);
}

TEST_CASE("hermitian flag soundness") {
  RngStream s(8);
  const auto f = hermitian_family(6, 4, s);
  for (const auto& ch : {sign_expander(f, s), z_phase_expander(f, 0.5, true), unitary_mixture(hermitian_unitary_family(4, 4, s))}) {
    REQUIRE(ch.hermitian);
    const Eigen::MatrixXcd sup = dense_superoperator(ch);
    CHECK((sup - sup.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("channel_gap against the dense superoperator") {
  RngStream s(9);
  const auto f = hermitian_family(12, 4, s);
  const auto ch = sign_expander(f, s);
  Eigen::MatrixXcd sup = dense_superoperator(ch);
  Eigen::VectorXcd fixed = Eigen::VectorXcd::Zero(144);
  for (int i = 0; i < 12; ++i) fixed[i * 12 + i] = 1.0 / std::sqrt(12.0);
  const Eigen::MatrixXcd proj = Eigen::MatrixXcd::Identity(144, 144) - fixed * fixed.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj * sup * proj);
  const double expect = es.eigenvalues().cwiseAbs().maxCoeff();
  for (auto oracle_choice : {Oracle::dense, Oracle::iterative}) {
    SolverOptions o;
    o.oracle = oracle_choice;
    o.tol = 1e-10;
    const auto r = channel_gap(ch, o, s);
    CHECK(r.construction == "sign");
    CHECK(r.lambda == doctest::Approx(expect).epsilon(1e-8));
  }
  KrausChannel id;
  id.kraus = {Eigen::MatrixXcd::Identity(3, 3)};
  id.hermitian = true;
  CHECK(channel_gap(id, SolverOptions{}, s).lambda == doctest::Approx(1.0));
  const auto zp = z_phase_expander(f, 0.5, false);
  CHECK_THROWS_AS(channel_gap(zp, SolverOptions{}, s), NotHermitian);
  KrausChannel amp;
  amp.kraus = {Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 2)};
  amp.kraus[0](0, 0) = 1.0;
  amp.kraus[0](1, 1) = std::sqrt(0.5);
  amp.kraus[1](1, 0) = std::sqrt(0.5);
  SolverOptions so;
  so.mode = SpectralMode::singular;
  CHECK_THROWS_AS(channel_gap(amp, so, s), InvalidArgument);
}

TEST_CASE("measure_2tpe_epsilon") {
  PermutationFamily ids;
  ids.members = {Permutation::identity(5), Permutation::identity(5), Permutation::identity(5),
                 Permutation::identity(5)};
  ids.hermitian = true;
  CHECK(measure_2tpe_epsilon(ids) == doctest::Approx(0.0));
  RngStream s(10);
  const auto base = hermitian_family(6, 4, s);
  CHECK(measure_2tpe_epsilon(doubled_counterexample(base)) == doctest::Approx(0.0).epsilon(1e-9));
  std::size_t positive = 0;
  for (int t = 0; t < 10; ++t) positive += measure_2tpe_epsilon(hermitian_family(40, 4, s)) > 0.0;
  CHECK(positive >= 9);
}

TEST_CASE("z-phase gap bound on small bases") {
  RngStream s(11);
  for (int t = 0; t < 5; ++t) {
    const auto f = hermitian_family(8 + t, 4, s);
    const double eps = measure_2tpe_epsilon(f);
    if (eps <= 0.0) continue;
    SolverOptions o;
    o.mode = SpectralMode::singular;
    CHECK(1.0 - channel_gap(z_phase_expander(f, eps, false), o, s).lambda >= eps / 48.0);
    o.mode = SpectralMode::eigen;
    CHECK(1.0 - channel_gap(z_phase_expander(f, eps, true), o, s).lambda >= eps / 48.0);
  }
}
