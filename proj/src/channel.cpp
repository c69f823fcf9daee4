#include "tpe/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tpe/classical_tpe.hpp"
#include "tpe/errors.hpp"

namespace tpe {

namespace {

using RowMajorCd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool adjoint_closed(const std::vector<Eigen::MatrixXcd>& ops) {
  std::vector<bool> used(ops.size(), false);
  for (std::size_t a = 0; a < ops.size(); ++a) {
    if (used[a]) continue;
    bool found = false;
    for (std::size_t b = a; b < ops.size() && !found; ++b) {
      if (used[b]) continue;
      if ((ops[b] - ops[a].adjoint()).cwiseAbs().maxCoeff() <= 1e-12) {
        used[a] = used[b] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool is_signed_permutation(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    int nonzero = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const cplx x = m(i, j);
      if (x == cplx(0.0, 0.0)) continue;
      if (std::abs(x.imag()) > 1e-12 || std::abs(std::abs(x.real()) - 1.0) > 1e-12) return false;
      ++nonzero;
    }
    if (nonzero != 1) return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(ChannelTag t) {
  switch (t) {
    case ChannelTag::unitary_mixture: return "unitary-mixture";
    case ChannelTag::sign: return "sign";
    case ChannelTag::z_phase: return "z-phase";
    case ChannelTag::z_phase_hermitian: return "z-phase-hermitian";
    case ChannelTag::explicit_kraus: return "explicit";
  }
  return "explicit";
}

ChannelTag channel_tag_from_string(std::string_view s) {
  for (auto t : {ChannelTag::unitary_mixture, ChannelTag::sign, ChannelTag::z_phase, ChannelTag::z_phase_hermitian,
                 ChannelTag::explicit_kraus}) {
    if (to_string(t) == s) return t;
  }
  throw InvalidArgument("unknown channel tag '" + std::string(s) + "'");
}

double trace_preservation_residual(const KrausChannel& ch) {
  const auto n = static_cast<Eigen::Index>(ch.size());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& a : ch.kraus) sum.noalias() += a * a.adjoint();
  return (sum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

double unitality_residual(const KrausChannel& ch) {
  const auto n = static_cast<Eigen::Index>(ch.size());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& a : ch.kraus) sum.noalias() += a.adjoint() * a;
  return (sum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

void KrausChannel::validate() const {
  if (kraus.empty()) throw InvalidArgument("channel has no Kraus operators");
  const auto n = kraus.front().rows();
  for (const auto& a : kraus) {
    if (a.rows() != n || a.cols() != n) throw InvalidArgument("Kraus operators must all be N x N");
  }
  if (const double r = trace_preservation_residual(*this); r > 1e-10) {
    throw InvalidArgument("channel is not trace preserving (residual " + std::to_string(r) + ")");
  }
  if (hermitian && !adjoint_closed(kraus)) {
    throw InvalidArgument("channel is flagged hermitian but its Kraus set is not closed under adjoints");
  }
  if (tag == ChannelTag::sign) {
    const double root_d = std::sqrt(static_cast<double>(kraus.size()));
    for (const auto& a : kraus) {
      if (!is_signed_permutation(a * root_d)) {
        throw InvalidArgument("sign channel: sqrt(D) A(s) is not a signed permutation matrix");
      }
    }
  }
}

Eigen::MatrixXd permutation_matrix(const Permutation& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m(p(static_cast<std::size_t>(j)), j) = 1.0;
  return m;
}

KrausChannel unitary_mixture(const UnitaryFamily& family) {
  family.validate();
  KrausChannel ch;
  ch.tag = ChannelTag::unitary_mixture;
  ch.hermitian = family.hermitian;
  const double scale = 1.0 / std::sqrt(static_cast<double>(family.degree()));
  for (const auto& u : family.members) ch.kraus.push_back(u.adjoint() * scale);
  return ch;
}

std::vector<std::vector<int>> sign_diagonals(std::size_t n, std::size_t half_degree, const RngStream& stream) {
  std::vector<std::vector<int>> out(half_degree, std::vector<int>(n));
  for (std::size_t s = 0; s < half_degree; ++s) {
    RngStream sub = stream.split(s);
    for (std::size_t i = 0; i < n; ++i) out[s][i] = sub.fair_bit() ? -1 : 1;
  }
  return out;
}

KrausChannel sign_expander(const PermutationFamily& family, const RngStream& stream) {
  family.validate();
  if (!family.hermitian || !has_inverse_pairing(family.members)) {
    throw InvalidArgument("sign_expander: family must be Hermitian with members[s + D/2] = members[s]^-1");
  }
  const std::size_t n = family.size();
  const std::size_t half = family.degree() / 2;
  const auto signs = sign_diagonals(n, half, stream);
  const double scale = 1.0 / std::sqrt(static_cast<double>(family.degree()));

  KrausChannel ch;
  ch.tag = ChannelTag::sign;
  ch.hermitian = true;
  ch.kraus.resize(family.degree());
  for (std::size_t s = 0; s < half; ++s) {
    const Permutation& p = family.members[s];
    // sigma(s + D/2) = P sigma P^† has entry i equal to sigma_{p^-1(i)}.
    Eigen::VectorXd sigma(static_cast<Eigen::Index>(n)), paired(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) sigma[static_cast<Eigen::Index>(i)] = signs[s][i];
    for (std::size_t j = 0; j < n; ++j) paired[p(j)] = signs[s][j];
    ch.kraus[s] = (permutation_matrix(p) * sigma.asDiagonal()).cast<cplx>() * scale;
    ch.kraus[s + half] =
        (permutation_matrix(family.members[s + half]) * paired.asDiagonal()).cast<cplx>() * scale;
  }
  return ch;
}

Eigen::MatrixXcd z_phase_matrix(std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  }
  return z;
}

KrausChannel z_phase_expander(const PermutationFamily& family, double epsilon, bool hermitian_variant) {
  family.validate();
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("z_phase_expander: epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
  const std::size_t n = family.size();
  if (n < 2) throw InvalidSize("z_phase_expander: N must be at least 2");
  if (hermitian_variant && !family.hermitian) {
    throw InvalidArgument("z_phase_expander: the Hermitian variant needs a Hermitian family");
  }
  const double p = 1.0 / (1.0 + epsilon);
  KrausChannel ch;
  ch.tag = hermitian_variant ? ChannelTag::z_phase_hermitian : ChannelTag::z_phase;
  ch.hermitian = hermitian_variant;
  const double perm_scale = std::sqrt(p / static_cast<double>(family.degree()));
  for (const auto& perm : family.members) ch.kraus.push_back(permutation_matrix(perm).cast<cplx>() * perm_scale);
  const Eigen::MatrixXcd z = z_phase_matrix(n);
  if (hermitian_variant) {
    const double zs = std::sqrt((1.0 - p) / 2.0);
    ch.kraus.push_back(z * zs);
    ch.kraus.push_back(z.adjoint() * zs);
  } else {
    ch.kraus.push_back(z * std::sqrt(1.0 - p));
  }
  return ch;
}

namespace {

void check_shape(const KrausChannel& ch, const Eigen::MatrixXcd& rho) {
  const auto n = static_cast<Eigen::Index>(ch.size());
  if (rho.rows() != n || rho.cols() != n) {
    throw DimensionMismatch("channel_apply: input is " + std::to_string(rho.rows()) + "x" +
                            std::to_string(rho.cols()) + ", channel acts on " + std::to_string(n) + "x" +
                            std::to_string(n));
  }
}

bool exactly_hermitian(const Eigen::MatrixXcd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (m(i, j) != std::conj(m(j, i))) return false;
    }
  }
  return true;
}

void symmetrize(Eigen::MatrixXcd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m(i, i) = cplx(m(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
}

}  // namespace

Eigen::MatrixXcd channel_apply(const KrausChannel& ch, const Eigen::MatrixXcd& rho) {
  check_shape(ch, rho);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& a : ch.kraus) out.noalias() += a.adjoint() * rho * a;
  if (exactly_hermitian(rho)) symmetrize(out);
  return out;
}

Eigen::MatrixXcd channel_apply_adjoint(const KrausChannel& ch, const Eigen::MatrixXcd& rho) {
  check_shape(ch, rho);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (const auto& a : ch.kraus) out.noalias() += a * rho * a.adjoint();
  if (exactly_hermitian(rho)) symmetrize(out);
  return out;
}

namespace {

void super_apply(const KrausChannel& ch, std::span<const cplx> in, std::span<cplx> out, bool adjoint) {
  const auto n = static_cast<Eigen::Index>(ch.size());
  if (in.size() != static_cast<std::size_t>(n * n) || out.size() != in.size()) {
    throw DimensionMismatch("superoperator: vector length must be N^2 = " + std::to_string(n * n));
  }
  Eigen::Map<const RowMajorCd> m(in.data(), n, n);
  Eigen::Map<RowMajorCd> r(out.data(), n, n);
  r.setZero();
  for (const auto& a : ch.kraus) {
    if (adjoint) {
      r.noalias() += a * m * a.adjoint();
    } else {
      r.noalias() += a.adjoint() * m * a;
    }
  }
}

}  // namespace

void superoperator_apply(const KrausChannel& ch, std::span<const cplx> in, std::span<cplx> out) {
  super_apply(ch, in, out, false);
}

void superoperator_apply_adjoint(const KrausChannel& ch, std::span<const cplx> in, std::span<cplx> out) {
  super_apply(ch, in, out, true);
}

Eigen::MatrixXcd dense_superoperator(const KrausChannel& ch) {
  const std::size_t dim = ch.size() * ch.size();
  Eigen::MatrixXcd s(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<cplx> e(dim, cplx(0.0, 0.0)), col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    superoperator_apply(ch, e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return s;
}

SpectralReport channel_gap(const KrausChannel& ch, const SolverOptions& options, RngStream& stream) {
  ch.validate();
  if (const double r = unitality_residual(ch); r > 1e-10) {
    throw InvalidArgument("channel_gap: channel is not unital (residual " + std::to_string(r) + ")");
  }
  if (options.mode == SpectralMode::eigen && !ch.hermitian) {
    throw NotHermitian("channel_gap: eigen mode requires a Hermitian channel; use singular mode");
  }
  const std::size_t n = ch.size();
  DeflatedOperator<cplx> d;
  d.dim = n * n;
  d.apply = [&ch](std::span<const cplx> in, std::span<cplx> out) { superoperator_apply(ch, in, out); };
  d.apply_adjoint = [&ch](std::span<const cplx> in, std::span<cplx> out) {
    superoperator_apply_adjoint(ch, in, out);
  };
  d.project_out = [n](std::span<cplx> v) {
    // Remove the component along vec(I) / sqrt(N).
    cplx trace(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) trace += v[i * n + i];
    const cplx shift = trace / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] -= shift;
  };
  d.trivial_count = 1;
  d.hermitian = ch.hermitian;
  SpectralReport report = solve_deflated(d, options, stream);
  report.construction = std::string(to_string(ch.tag));
  report.n = n;
  report.degree = ch.kraus.size();
  report.k = 1;
  report.lambda_h = ramanujan_reference(ch.kraus.size());
  return report;
}

double measure_2tpe_epsilon(const PermutationFamily& family, const SolverOptions& options, RngStream& stream) {
  const ClassicalTpeOperator op(family, 2);
  SolverOptions o = options;
  o.mode = family.hermitian ? SpectralMode::eigen : SpectralMode::singular;
  const SpectralReport r = lambda_estimate(op, o, stream);
  return std::clamp(1.0 - r.lambda, 0.0, 1.0);
}

double measure_2tpe_epsilon(const PermutationFamily& family) {
  RngStream stream(family.seed);
  return measure_2tpe_epsilon(family, SolverOptions{}, stream);
}

Eigen::MatrixXd diagonal_sector_matrix(const KrausChannel& ch) {
  const auto n = static_cast<Eigen::Index>(ch.size());
  Eigen::MatrixXd t(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
    e(l, l) = 1.0;
    const Eigen::MatrixXcd out = channel_apply(ch, e);
    for (Eigen::Index j = 0; j < n; ++j) t(j, l) = out(j, j).real();
  }
  return t;
}

double phi2_z_overlap(std::size_t n) {
  if (n < 2) throw InvalidSize("phi2_z_overlap: N must be at least 2");
  const Eigen::MatrixXcd z = z_phase_matrix(n);
  cplx sum(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum += z(i, i) * std::conj(z(j, j));
    }
  }
  return sum.real() / static_cast<double>(n * (n - 1));
}

}  // namespace tpe
