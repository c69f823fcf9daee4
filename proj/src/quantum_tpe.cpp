#include "tpe/quantum_tpe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tpe/classical_tpe.hpp"
#include "tpe/errors.hpp"

namespace tpe {

using RowMajorCd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double unitarity_residual(const Eigen::MatrixXcd& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

void UnitaryFamily::validate() const {
  if (members.empty()) throw InvalidArgument("unitary family has no members");
  const auto n = members.front().rows();
  for (const auto& u : members) {
    if (u.rows() != n || u.cols() != n) throw InvalidArgument("unitary family members must be N x N");
    if (unitarity_residual(u) > 1e-10) throw InvalidArgument("unitary family member is not unitary to 1e-10");
  }
  if (hermitian) {
    if (members.size() % 2 != 0) throw InvalidArgument("hermitian unitary family needs an even degree");
    const std::size_t half = members.size() / 2;
    for (std::size_t s = 0; s < half; ++s) {
      if ((members[s + half] - members[s].adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument("hermitian unitary family: members[s + D/2] != members[s]^dagger");
      }
    }
  }
}

Eigen::MatrixXcd haar_unitary(std::size_t n, RngStream& stream) {
  if (n == 0) throw InvalidSize("haar_unitary: N must be at least 1");
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z(dim, dim);
  const double scale = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = stream.normal();
      const double im = stream.normal();
      z(i, j) = cplx(re, im) * scale;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : cplx(1.0, 0.0);
  }
  return q;
}

UnitaryFamily hermitian_unitary_family(std::size_t n, std::size_t degree, RngStream& stream) {
  if (degree == 0 || degree % 2 != 0) throw InvalidDegree("hermitian_unitary_family: degree must be even");
  UnitaryFamily family;
  family.hermitian = true;
  family.seed = stream.seed();
  const std::size_t half = degree / 2;
  for (std::size_t s = 0; s < half; ++s) family.members.push_back(haar_unitary(n, stream));
  for (std::size_t s = 0; s < half; ++s) family.members.push_back(family.members[s].adjoint());
  return family;
}

UnitaryFamily random_unitary_family(std::size_t n, std::size_t degree, RngStream& stream) {
  if (degree == 0) throw InvalidDegree("random_unitary_family: degree must be positive");
  UnitaryFamily family;
  family.seed = stream.seed();
  for (std::size_t s = 0; s < degree; ++s) family.members.push_back(haar_unitary(n, stream));
  return family;
}

QuantumTpeOperator::QuantumTpeOperator(UnitaryFamily family, std::size_t k, std::size_t dim_cap)
    : family_(std::move(family)), k_(k) {
  if (k_ == 0) throw InvalidArgument("QuantumTpeOperator: k must be at least 1");
  family_.validate();
  dim_ = checked_power(family_.size(), 2 * k_, dim_cap);
  for (const auto& u : family_.members) {
    conj_.push_back(u.conjugate());
    adjoint_.push_back(u.adjoint());
    transpose_.push_back(u.transpose());
  }
}

void QuantumTpeOperator::apply_with(std::span<const cplx> in, std::span<cplx> out,
                                    const std::vector<Eigen::MatrixXcd>& left,
                                    const std::vector<Eigen::MatrixXcd>& right) const {
  if (in.size() != dim_ || out.size() != dim_) {
    throw DimensionMismatch("QuantumTpeOperator: vector length " + std::to_string(in.size()) +
                            " does not match N^{2k} = " + std::to_string(dim_));
  }
  const auto n = static_cast<Eigen::Index>(family_.size());
  const auto dim = static_cast<Eigen::Index>(dim_);
  std::vector<cplx> a(dim_), b(dim_);
  std::fill(out.begin(), out.end(), cplx(0.0, 0.0));

  for (std::size_t s = 0; s < family_.degree(); ++s) {
    std::copy(in.begin(), in.end(), a.begin());
    // Mode m (0-based, most significant first): view the tensor as
    // (outer, N, inner) and multiply every (N x inner) slab from the left.
    Eigen::Index inner = dim / n;
    Eigen::Index outer = 1;
    for (std::size_t m = 0; m < 2 * k_; ++m) {
      const Eigen::MatrixXcd& op = (m < k_) ? left[s] : right[s];
      for (Eigen::Index o = 0; o < outer; ++o) {
        const Eigen::Index offset = o * n * inner;
        Eigen::Map<const RowMajorCd> src(a.data() + offset, n, inner);
        Eigen::Map<RowMajorCd> dst(b.data() + offset, n, inner);
        dst.noalias() = op * src;
      }
      std::swap(a, b);
      outer *= n;
      inner /= n;
    }
    for (std::size_t i = 0; i < dim_; ++i) out[i] += a[i];
  }
  const double scale = 1.0 / static_cast<double>(family_.degree());
  for (auto& x : out) x *= scale;
}

void QuantumTpeOperator::apply_hat(std::span<const cplx> in, std::span<cplx> out) const {
  apply_with(in, out, family_.members, conj_);
}

std::vector<cplx> QuantumTpeOperator::apply_hat(std::span<const cplx> in) const {
  std::vector<cplx> out(dim_);
  apply_hat(in, out);
  return out;
}

void QuantumTpeOperator::apply_hat_adjoint(std::span<const cplx> in, std::span<cplx> out) const {
  apply_with(in, out, adjoint_, transpose_);
}

std::vector<Permutation> all_permutations(std::size_t k) {
  std::vector<std::uint32_t> images(k);
  std::iota(images.begin(), images.end(), 0u);
  std::vector<Permutation> out;
  do {
    out.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

std::vector<double> perm_operator_vec(std::size_t n, const Permutation& pi) {
  const std::size_t k = pi.size();
  const std::size_t side = checked_power(n, k, kDefaultDimCap);
  std::vector<double> out(checked_power(side, 2, std::numeric_limits<std::size_t>::max()), 0.0);
  std::vector<std::uint32_t> digits(k, 0);
  for (std::size_t row = 0; row < side; ++row) {
    // row = (i_1..i_k); column = (i_pi(1)..i_pi(k)).
    std::size_t col = 0;
    for (std::size_t j = 0; j < k; ++j) col = col * n + digits[pi(j)];
    out[row * side + col] = 1.0;
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < n) break;
      digits[i] = 0;
    }
  }
  return out;
}

PermOperatorGram perm_operator_gram(std::size_t n, std::size_t k) {
  if (k == 0 || k > 6) throw InvalidArgument("perm_operator_gram: k must be in 1..6");
  if (n == 0) throw InvalidSize("perm_operator_gram: N must be positive");
  PermOperatorGram out;
  out.perms = all_permutations(k);
  const auto m = static_cast<Eigen::Index>(out.perms.size());
  out.gram.resize(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const Permutation inv_a = inverse(out.perms[a]);
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto cycles = cycle_count(compose(inv_a, out.perms[b]));
      out.gram(a, b) = std::pow(static_cast<double>(n), static_cast<double>(cycles));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.gram, Eigen::EigenvaluesOnly);
  out.eigenvalues = es.eigenvalues();
  const double top = out.eigenvalues.cwiseAbs().maxCoeff();
  out.rank = static_cast<std::size_t>((out.eigenvalues.array() > 1e-8 * top).count());
  return out;
}

TwirlBasis::TwirlBasis(std::size_t n, std::size_t k, std::size_t dim_cap) {
  if (k == 0 || k > 6) throw InvalidArgument("twirl_basis: k must be in 1..6");
  const std::size_t dim = checked_power(n, 2 * k, dim_cap);
  const auto perms = all_permutations(k);
  Eigen::MatrixXd w(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(perms.size()));
  for (std::size_t a = 0; a < perms.size(); ++a) {
    const auto v = perm_operator_vec(n, perms[a]);
    w.col(static_cast<Eigen::Index>(a)) = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(dim));
  }
  const PermOperatorGram g = perm_operator_gram(n, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.gram);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 1e-8 * top) kept.push_back(i);
  }
  basis_.resize(w.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const Eigen::Index i = kept[c];
    basis_.col(static_cast<Eigen::Index>(c)) = w * es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()[i]);
  }
}

void TwirlBasis::project_out(std::span<cplx> v) const {
  if (v.size() != dim()) throw DimensionMismatch("TwirlBasis::project_out: length mismatch");
  Eigen::Map<Eigen::VectorXcd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  const Eigen::VectorXcd coeffs = basis_.transpose().cast<cplx>() * x;
  x.noalias() -= basis_.cast<cplx>() * coeffs;
}

std::vector<std::vector<cplx>> TwirlBasis::vectors() const {
  std::vector<std::vector<cplx>> out;
  for (Eigen::Index c = 0; c < basis_.cols(); ++c) {
    std::vector<cplx> v(dim());
    for (Eigen::Index i = 0; i < basis_.rows(); ++i) v[static_cast<std::size_t>(i)] = basis_(i, c);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<cplx>> twirl_basis(std::size_t n, std::size_t k, std::size_t dim_cap) {
  return TwirlBasis(n, k, dim_cap).vectors();
}

SpectralReport lambda_estimate_quantum(const QuantumTpeOperator& op, const SolverOptions& options,
                                       RngStream& stream) {
  if (options.mode == SpectralMode::eigen && !op.family().hermitian) {
    throw NotHermitian("eigen mode requires a Hermitian unitary family; use singular mode");
  }
  const TwirlBasis basis(op.n(), op.k(), op.dim());
  DeflatedOperator<cplx> d;
  d.dim = op.dim();
  d.apply = [&op](std::span<const cplx> in, std::span<cplx> out) { op.apply_hat(in, out); };
  d.apply_adjoint = [&op](std::span<const cplx> in, std::span<cplx> out) { op.apply_hat_adjoint(in, out); };
  d.project_out = [&basis](std::span<cplx> v) { basis.project_out(v); };
  d.trivial_count = basis.count();
  d.hermitian = op.family().hermitian;
  SpectralReport report = solve_deflated(d, options, stream);
  report.construction = "quantum";
  report.n = op.n();
  report.degree = op.degree();
  report.k = op.k();
  report.seed = op.family().seed;
  report.lambda_h = ramanujan_reference(op.degree());
  return report;
}

MomentEstimate trace_moment_mc(std::size_t n, std::size_t k, std::size_t samples, const RngStream& stream) {
  if (samples < 100) throw InvalidArgument("trace_moment_mc: at least 100 samples required");
  // Welford accumulation in sample order.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    RngStream sub = stream.split(i);
    const Eigen::MatrixXcd x = haar_unitary(n, sub);
    const double value = std::pow(std::norm(x.trace()), static_cast<double>(k));
    const double delta = value - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (value - mean);
  }
  MomentEstimate est;
  est.mean = mean;
  est.samples = samples;
  est.std_error = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return est;
}

double phase_invariant_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionMismatch("phase_invariant_distance: shapes differ");
  const double n = static_cast<double>(u.rows());
  return 2.0 * n - 2.0 * std::abs((u.adjoint() * v).trace());
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

Eigen::MatrixXcd entangled_tensor_power(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& phi, std::size_t k) {
  const auto n = u.rows();
  const Eigen::MatrixXcd lift = kron(u, Eigen::MatrixXcd::Identity(n, n));
  const Eigen::MatrixXcd single = lift * phi * lift.adjoint();
  Eigen::MatrixXcd out = single;
  for (std::size_t c = 1; c < k; ++c) out = kron(out, single);
  return out;
}

}  // namespace

OverlapCheck sk_overlap_check(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v, std::size_t k, std::size_t cap) {
  if (u.rows() != u.cols() || v.rows() != v.cols() || u.rows() != v.rows()) {
    throw DimensionMismatch("sk_overlap_check: U and V must be square of equal size");
  }
  if (k == 0) throw InvalidArgument("sk_overlap_check: k must be positive");
  const auto n = static_cast<std::size_t>(u.rows());
  checked_power(n, 2 * k, cap);

  const auto dn = static_cast<Eigen::Index>(n);
  Eigen::VectorXcd phi_vec = Eigen::VectorXcd::Zero(dn * dn);
  for (Eigen::Index i = 0; i < dn; ++i) phi_vec[i * dn + i] = 1.0 / std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd phi = phi_vec * phi_vec.adjoint();

  const Eigen::MatrixXcd rho_u = entangled_tensor_power(u, phi, k);
  const Eigen::MatrixXcd rho_v = entangled_tensor_power(v, phi, k);
  OverlapCheck out;
  // tr(A B) = sum_ij A_ij B_ji
  out.lhs = (rho_u.array() * rho_v.transpose().array()).sum().real();
  const double d = phase_invariant_distance(u, v);
  out.rhs = std::pow(1.0 - d / (2.0 * static_cast<double>(n)), 2.0 * static_cast<double>(k));
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace tpe
