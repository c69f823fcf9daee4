#include "tpe/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "tpe/errors.hpp"

namespace tpe {

bool MixingTrace::any_violation() const {
  return std::any_of(steps.begin(), steps.end(), [](const MixingStep& s) { return s.violated; });
}

double trace_norm_hermitian(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

void check_density_matrix(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw InvalidArgument("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx(1.0, 0.0)) > 1e-8) throw InvalidArgument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) throw InvalidArgument("density matrix is not positive semidefinite");
}

namespace {

void fill_bounds(MixingStep& step, std::optional<double> lambda, double l1_scale) {
  if (!lambda) return;
  const double decay = std::pow(*lambda, static_cast<double>(step.m));
  step.bound_l2 = decay;
  step.bound_l1 = l1_scale * decay;
  step.violated = step.l2 > step.bound_l2 + kMixingSlack || step.l1 > step.bound_l1 + kMixingSlack;
}

}  // namespace

MixingTrace iterate_channel(const KrausChannel& ch, const Eigen::MatrixXcd& rho0, std::size_t steps,
                            std::optional<double> lambda) {
  ch.validate();
  check_density_matrix(rho0);
  if (static_cast<std::size_t>(rho0.rows()) != ch.size()) throw DimensionMismatch("iterate_channel: size mismatch");
  const auto n = rho0.rows();
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n);

  MixingTrace trace;
  trace.construction = std::string(to_string(ch.tag));
  trace.n = static_cast<std::size_t>(n);
  trace.degree = ch.kraus.size();
  trace.lambda_ref = lambda;
  trace.bound_uninformative = lambda && *lambda >= 1.0;

  Eigen::MatrixXcd rho = rho0;
  for (std::size_t m = 0; m <= steps; ++m) {
    if (m > 0) rho = channel_apply(ch, rho);
    const Eigen::MatrixXcd diff = rho - mixed;
    MixingStep step;
    step.m = m;
    step.l2 = diff.norm();
    step.l1 = trace_norm_hermitian(diff);
    fill_bounds(step, lambda, std::sqrt(static_cast<double>(n)));
    trace.steps.push_back(step);
  }
  return trace;
}

std::vector<double> class_uniform(const PartitionClasses& classes, std::size_t label) {
  if (label >= classes.count()) throw InvalidArgument("class_uniform: label out of range");
  std::vector<double> u(classes.dim(), 0.0);
  const double w = 1.0 / static_cast<double>(classes.class_size(label));
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (classes.label(i) == label) u[i] = w;
  }
  return u;
}

MixingTrace iterate_classical(const ClassicalTpeOperator& op, const std::vector<double>& p0, std::size_t steps,
                              std::optional<double> lambda) {
  if (p0.size() != op.dim()) throw DimensionMismatch("iterate_classical: distribution length must be N^k");
  double total = 0.0;
  for (double x : p0) {
    if (!(x >= 0.0)) throw InvalidArgument("iterate_classical: negative or NaN probability");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) throw InvalidArgument("iterate_classical: probabilities do not sum to 1");

  const PartitionClasses classes(op.n(), op.k(), op.dim());
  std::optional<std::size_t> label;
  for (std::size_t i = 0; i < p0.size(); ++i) {
    if (p0[i] == 0.0) continue;
    if (!label) {
      label = classes.label(i);
    } else if (*label != classes.label(i)) {
      throw InvalidArgument("iterate_classical: support spans more than one equality-pattern class");
    }
  }
  const std::vector<double> target = class_uniform(classes, *label);

  MixingTrace trace;
  trace.construction = std::string(to_string(op.family().construction));
  trace.n = op.n();
  trace.degree = op.degree();
  trace.k = op.k();
  trace.seed = op.family().seed;
  trace.lambda_ref = lambda;
  trace.bound_uninformative = lambda && *lambda >= 1.0;

  std::vector<double> p = p0, next(p0.size());
  for (std::size_t m = 0; m <= steps; ++m) {
    if (m > 0) {
      op.apply(p, next);
      std::swap(p, next);
    }
    MixingStep step;
    step.m = m;
    double l1 = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p[i] - target[i];
      l1 += std::abs(d);
      l2 += d * d;
    }
    step.l1 = l1;
    step.l2 = std::sqrt(l2);
    fill_bounds(step, lambda, std::sqrt(static_cast<double>(op.dim())));
    trace.steps.push_back(step);
  }
  return trace;
}

std::size_t required_iterations(double lambda, std::size_t n, double eps) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("required_iterations: lambda must lie in (0, 1)");
  if (!(eps > 0.0)) throw InvalidArgument("required_iterations: eps must be positive");
  if (n == 0) throw InvalidSize("required_iterations: N must be positive");
  const double target = eps / std::sqrt(static_cast<double>(n));
  if (target >= 1.0) return 0;
  auto m = static_cast<std::size_t>(std::max(0.0, std::ceil(std::log(target) / std::log(lambda))));
  // Correct for roundoff in the logarithms.
  while (m > 0 && std::pow(lambda, static_cast<double>(m - 1)) <= target) --m;
  while (std::pow(lambda, static_cast<double>(m)) > target) ++m;
  return m;
}

WordCount word_count(std::uint64_t degree, std::uint64_t m) {
  WordCount out;
  std::uint64_t value = 1;
  bool fits = true;
  for (std::uint64_t i = 0; i < m && fits; ++i) {
    if (__builtin_mul_overflow(value, degree, &value)) fits = false;
  }
  if (fits) {
    out.value = value;
    out.decimal = std::to_string(value);
    return out;
  }
  boost::multiprecision::cpp_int big = 1;
  for (std::uint64_t i = 0; i < m; ++i) big *= degree;
  out.decimal = big.str();
  return out;
}

double word_count_exponent(std::size_t degree, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("word_count_exponent: lambda must lie in (0, 1)");
  return 0.5 * std::log(static_cast<double>(degree)) / std::log(1.0 / lambda);
}

Eigen::MatrixXcd random_pure_state(std::size_t n, RngStream& stream) {
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const double re = stream.normal();
    const double im = stream.normal();
    psi[i] = cplx(re, im);
  }
  psi.normalize();
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  // Exact Hermiticity keeps channel_apply on its symmetrized path.
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    rho(i, i) = cplx(rho(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < rho.cols(); ++j) rho(j, i) = std::conj(rho(i, j));
  }
  return rho;
}

StateRandomization state_random_experiment(const UnitaryFamily& family, std::size_t m, std::size_t trials,
                                           const RngStream& stream, std::optional<double> lambda) {
  const std::size_t n = family.size();
  if (n > 64) throw CapExceeded("state_random_experiment: N = " + std::to_string(n) + " exceeds 64");
  const KrausChannel ch = unitary_mixture(family);
  const auto dim = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(n);

  StateRandomization out;
  out.m = m;
  out.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    RngStream sub = stream.split(t);
    Eigen::MatrixXcd rho = random_pure_state(n, sub);
    for (std::size_t step = 0; step < m; ++step) rho = channel_apply(ch, rho);
    out.worst_l1 = std::max(out.worst_l1, trace_norm_hermitian(rho - mixed));
  }
  if (lambda) out.implied_epsilon = std::sqrt(static_cast<double>(n)) * std::pow(*lambda, static_cast<double>(m));
  return out;
}

}  // namespace tpe
