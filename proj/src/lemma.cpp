#include "tpe/lemma.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tpe/channel.hpp"
#include "tpe/errors.hpp"
#include "tpe/quantum_tpe.hpp"

namespace tpe {

namespace {

using Mat = Eigen::MatrixXcd;

// U diag(s) V^† with Haar U, V and s uniform in [0, 1], largest forced to 1.
Mat unit_norm_contraction(Eigen::Index n, RngStream& stream) {
  if (n == 0) return Mat(0, 0);
  const Mat u = haar_unitary(static_cast<std::size_t>(n), stream);
  const Mat v = haar_unitary(static_cast<std::size_t>(n), stream);
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = stream.uniform01();
  s[0] = 1.0;
  return u * s.cast<cplx>().asDiagonal() * v.adjoint();
}

Mat random_contraction(Eigen::Index n, RngStream& stream) {
  const Mat u = haar_unitary(static_cast<std::size_t>(n), stream);
  const Mat v = haar_unitary(static_cast<std::size_t>(n), stream);
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s[i] = stream.uniform01();
  return u * s.cast<cplx>().asDiagonal() * v.adjoint();
}

Mat block_diag(const Mat& a, const Mat& b) {
  Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace

std::string_view to_string(YStrategy s) {
  switch (s) {
    case YStrategy::blend: return "blend";
    case YStrategy::rescaled: return "rescaled";
    case YStrategy::extremal: return "extremal";
  }
  return "blend";
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()[0];
}

double LemmaInstance::Residuals::max() const {
  return std::max({x_norm_excess, y_norm_excess, pi_fixed, x_complement_excess, y_block_excess});
}

LemmaInstance::Residuals LemmaInstance::residuals() const {
  const Mat id = Mat::Identity(pi.rows(), pi.cols());
  const Mat q = id - pi;
  Residuals r;
  r.x_norm_excess = std::max(0.0, operator_norm(x) - 1.0);
  r.y_norm_excess = std::max(0.0, operator_norm(y) - 1.0);
  r.pi_fixed = std::max(operator_norm(pi * x - pi), operator_norm(x * pi - pi));
  r.x_complement_excess = std::max(0.0, operator_norm(q * x * q) - (1.0 - eps_x));
  r.y_block_excess = std::max(0.0, operator_norm(pi * y * pi) - (1.0 - eps_y));
  return r;
}

LemmaInstance sample_lemma_instance(std::size_t dim, double eps_x, double eps_y, std::size_t rank_pi,
                                    RngStream& stream, YStrategy strategy) {
  if (dim < 2) throw InvalidArgument("sample_lemma_instance: dim must be at least 2");
  if (rank_pi < 1 || rank_pi >= dim) throw InvalidArgument("sample_lemma_instance: need 1 <= rank_pi < dim");
  if (!(eps_x > 0.0 && eps_x < 1.0) || !(eps_y > 0.0 && eps_y < 1.0)) {
    throw InvalidArgument("sample_lemma_instance: eps_x and eps_y must lie in (0, 1)");
  }
  const auto n = static_cast<Eigen::Index>(dim);
  const auto r = static_cast<Eigen::Index>(rank_pi);
  const Eigen::Index rest = n - r;

  // Everything is built in a basis where Pi = diag(1_r, 0), then rotated.
  const Mat w = haar_unitary(dim, stream);
  const Mat pi_b = block_diag(Mat::Identity(r, r), Mat::Zero(rest, rest));

  Mat x_block;
  if (strategy == YStrategy::extremal) {
    // Put the full (1 - eps_x) weight on the vector the Y rotation touches.
    x_block = Mat::Zero(rest, rest);
    x_block(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * stream.uniform01());
    if (rest > 1) x_block.bottomRightCorner(rest - 1, rest - 1) = random_contraction(rest - 1, stream);
  } else {
    x_block = unit_norm_contraction(rest, stream);
  }
  const Mat x_b = block_diag(Mat::Identity(r, r), (1.0 - eps_x) * x_block);

  Mat y_b;
  switch (strategy) {
    case YStrategy::blend: {
      const Mat g = block_diag(unit_norm_contraction(r, stream), random_contraction(rest, stream));
      Mat h = random_contraction(n, stream);
      h.topLeftCorner(r, r).setZero();
      h /= std::max(1.0, operator_norm(h));
      y_b = (1.0 - eps_y) * g + eps_y * h;
      break;
    }
    case YStrategy::rescaled: {
      y_b = random_contraction(n, stream);
      const double block = operator_norm(y_b.topLeftCorner(r, r));
      if (block > 1e-12) {
        y_b.topLeftCorner(r, r) *= (1.0 - eps_y) / block;
      } else {
        y_b.topLeftCorner(r, r) = (1.0 - eps_y) * unit_norm_contraction(r, stream);
      }
      y_b /= std::max(1.0, operator_norm(y_b));
      break;
    }
    case YStrategy::extremal: {
      // Coordinates 0 (inside Pi) and r (outside) carry the reflection; the
      // remaining coordinates get a block-diagonal contraction.
      const double a = 1.0 - eps_y;
      const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
      const cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * stream.uniform01());
      y_b = Mat::Zero(n, n);
      y_b(0, 0) = a;
      y_b(0, r) = b * phase;
      y_b(r, 0) = b * std::conj(phase);
      y_b(r, r) = -a;
      if (r > 1) y_b.block(1, 1, r - 1, r - 1) = a * random_contraction(r - 1, stream);
      if (rest > 1) y_b.bottomRightCorner(rest - 1, rest - 1) = random_contraction(rest - 1, stream);
      break;
    }
  }

  LemmaInstance inst;
  inst.dim = dim;
  inst.rank_pi = rank_pi;
  inst.pi = w * pi_b * w.adjoint();
  inst.x = w * x_b * w.adjoint();
  inst.y = w * y_b * w.adjoint();
  inst.eps_x = eps_x;
  inst.eps_y = eps_y;
  inst.p = 1.0 / (1.0 + eps_x);
  return inst;
}

LemmaInstance theorem3_lemma_instance(const PermutationFamily& family) {
  family.validate();
  const std::size_t n = family.size();
  if (n < 3) throw InvalidSize("theorem3_lemma_instance: N must be at least 3");
  if (n > 24) throw CapExceeded("theorem3_lemma_instance: dense N^2 matrices need N <= 24");
  const auto dim = static_cast<Eigen::Index>(n * n);

  Eigen::VectorXcd phi1 = Eigen::VectorXcd::Zero(dim), phi2 = Eigen::VectorXcd::Zero(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) {
        phi1[static_cast<Eigen::Index>(i * n + j)] = 1.0 / std::sqrt(static_cast<double>(n));
      } else {
        phi2[static_cast<Eigen::Index>(i * n + j)] = 1.0 / std::sqrt(static_cast<double>(n * (n - 1)));
      }
    }
  }
  const Mat proj1 = phi1 * phi1.adjoint();

  Mat l2 = Mat::Zero(dim, dim);
  for (const auto& perm : family.members) {
    const Mat p = permutation_matrix(perm).cast<cplx>();
    l2 += kron(p, p);
  }
  l2 /= static_cast<double>(family.degree());
  const Mat z = z_phase_matrix(n);

  LemmaInstance inst;
  inst.dim = static_cast<std::size_t>(dim);
  inst.rank_pi = 1;
  inst.pi = phi2 * phi2.adjoint();
  inst.x = l2 - proj1;
  inst.y = kron(z, z.conjugate()) - proj1;
  const Mat q = Mat::Identity(dim, dim) - inst.pi;
  inst.eps_x = std::clamp(1.0 - operator_norm(q * inst.x * q), 0.0, 1.0);
  inst.eps_y = 1.0 - 1.0 / static_cast<double>(n - 1);
  inst.p = 1.0 / (1.0 + inst.eps_x);
  return inst;
}

LemmaInstance sample_lemma_case(std::size_t index, const RngStream& stream) {
  static constexpr double corners[] = {1e-6, 1e-3, 0.5, 1.0 - 1e-3, 1.0 - 1e-6};
  RngStream sub = stream.split(index);
  auto draw = [&sub]() {
    if (sub.uniform_below(3) == 0) return corners[sub.uniform_below(std::size(corners))];
    return std::clamp(sub.uniform01_open_low(), 1e-9, 1.0 - 1e-9);
  };
  const std::size_t dim = 2 + sub.uniform_below(7);
  const std::size_t rank = 1 + sub.uniform_below(dim - 1);
  const auto strategy = static_cast<YStrategy>(index % 3);
  const double eps_x = draw();
  const double eps_y = draw();
  LemmaInstance inst = sample_lemma_instance(dim, eps_x, eps_y, rank, sub, strategy);
  switch (sub.uniform_below(4)) {
    case 0: break;  // 1/(1+eps_x)
    case 1: inst.p = draw(); break;
    default: inst.p = std::clamp(sub.uniform01_open_low(), 1e-9, 1.0 - 1e-9); break;
  }
  return inst;
}

LemmaCheck check_lemma(const LemmaInstance& inst) {
  LemmaCheck c;
  c.norm = operator_norm(inst.p * inst.x + (1.0 - inst.p) * inst.y);
  c.bound_intermediate = 1.0 - (inst.eps_y / 12.0) * std::min(inst.p * inst.eps_x, 1.0 - inst.p);
  c.bound_mixed = 1.0 - inst.eps_x * inst.eps_y / 24.0;
  c.margin = c.bound_intermediate - c.norm;
  c.pass = c.norm <= c.bound_intermediate + kLemmaTolerance;
  return c;
}

}  // namespace tpe
