#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tpe/rng.hpp"

namespace tpe {

inline constexpr std::size_t kDefaultDimCap = std::size_t{1} << 24;
inline constexpr std::size_t kDefaultDenseCap = 4096;

// eigen: largest |eigenvalue| off the trivial space (Hermitian operators).
// singular: largest singular value off the trivial space.
enum class SpectralMode { eigen, singular };
enum class SolverMethod { power, lanczos };
// automatic picks the dense route whenever dim <= dense_cap.
enum class Oracle { automatic, dense, iterative };

std::string_view to_string(SpectralMode m);
std::string_view to_string(SolverMethod m);
std::string_view to_string(Oracle o);
SpectralMode spectral_mode_from_string(std::string_view s);
SolverMethod solver_method_from_string(std::string_view s);
Oracle oracle_from_string(std::string_view s);

struct SolverOptions {
  SpectralMode mode = SpectralMode::eigen;
  SolverMethod method = SolverMethod::power;
  Oracle oracle = Oracle::automatic;
  double tol = 1e-8;
  std::size_t max_iters = 100000;
  std::size_t restarts = 3;
  // Relative change of the estimate is measured over this many iterations.
  std::size_t window = 10;
  std::size_t dense_cap = kDefaultDenseCap;
  // Count unit eigenvalues on the dense route (one extra eigensolve for
  // non-Hermitian operators).
  bool count_unit = true;
  double unit_tol = 1e-6;
  bool keep_vector = false;
};

// Outcome of one gap computation.
struct SpectralReport {
  std::string construction;
  std::size_t n = 0;
  std::size_t degree = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  SpectralMode mode = SpectralMode::eigen;
  std::string method;  // "dense", "power" or "lanczos"
  double lambda = 0.0;         // leading nontrivial |eigenvalue| or singular value
  double signed_lambda = 0.0;  // signed eigenvalue in eigen mode, else == lambda
  double lambda_h = 0.0;       // 2 sqrt(D-1) / D
  std::size_t unit_mult = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;
  // Leading vector when requested. Complex vectors are interleaved (re, im).
  std::vector<double> vector;
  bool vector_is_complex = false;
};

double ramanujan_reference(std::size_t degree);

// A linear map together with the projector onto the complement of its known
// fixed space. Both the map and its adjoint must leave that space invariant.
template <class Scalar>
struct DeflatedOperator {
  using Apply = std::function<void(std::span<const Scalar>, std::span<Scalar>)>;
  std::size_t dim = 0;
  Apply apply;
  Apply apply_adjoint;
  std::function<void(std::span<Scalar>)> project_out;
  std::size_t trivial_count = 0;
  bool hermitian = false;
};

// Solver core: fills lambda, signed_lambda, unit_mult, iterations, converged,
// residual, method and (optionally) vector. Identification fields are left to
// the caller. Throws NotHermitian for eigen mode on a non-Hermitian operator.
template <class Scalar>
SpectralReport solve_deflated(const DeflatedOperator<Scalar>& op, const SolverOptions& options,
                              RngStream& stream);

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Explicit matrix of op.apply, column by column.
template <class Scalar>
DenseMatrix<Scalar> assemble_dense(const DeflatedOperator<Scalar>& op);

// Eigenvalues of a square matrix (complex in general). Uses the self-adjoint
// solver when the matrix is Hermitian to 1e-12.
template <class Scalar>
std::vector<std::complex<double>> dense_eigenvalues(const DenseMatrix<Scalar>& m);

// Number of eigenvalues within tol of 1.
template <class Scalar>
std::size_t count_unit_eigenvalues(const DenseMatrix<Scalar>& m, double tol);

}  // namespace tpe
