#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tpe/permutation.hpp"
#include "tpe/spectral.hpp"

namespace tpe {

using cplx = std::complex<double>;

// The quantum expander datum: D unitaries of size N x N.
struct UnitaryFamily {
  std::vector<Eigen::MatrixXcd> members;
  // members[s + D/2] == members[s]^† for s < D/2.
  bool hermitian = false;
  std::uint64_t seed = 0;

  std::size_t size() const { return members.empty() ? 0 : static_cast<std::size_t>(members.front().rows()); }
  std::size_t degree() const { return members.size(); }

  // Throws InvalidArgument on non-square, non-unitary (1e-10) or mis-paired members.
  void validate() const;
};

// max_ij |(U^† U - I)_ij|
double unitarity_residual(const Eigen::MatrixXcd& u);

// Haar-distributed unitary: Ginibre matrix, Householder QR, then the phases
// of diag(R) are moved into Q.
Eigen::MatrixXcd haar_unitary(std::size_t n, RngStream& stream);

// First D/2 members Haar i.i.d., second half their adjoints.
UnitaryFamily hermitian_unitary_family(std::size_t n, std::size_t degree, RngStream& stream);

// All D members Haar i.i.d. (no pairing).
UnitaryFamily random_unitary_family(std::size_t n, std::size_t degree, RngStream& stream);

// E_k = (1/D) sum_s U(s)^{⊗k} ⊗ conj(U(s))^{⊗k} acting on N^{2k} vectors.
// Modes are ordered most significant first; modes 1..k carry U and modes
// k+1..2k carry conj(U), so a row-major vec(M) of an N^k x N^k matrix maps to
// vec(U^{⊗k} M U^{†⊗k}).
class QuantumTpeOperator {
 public:
  QuantumTpeOperator(UnitaryFamily family, std::size_t k, std::size_t dim_cap = kDefaultDimCap);

  const UnitaryFamily& family() const { return family_; }
  std::size_t n() const { return family_.size(); }
  std::size_t degree() const { return family_.degree(); }
  std::size_t k() const { return k_; }
  std::size_t dim() const { return dim_; }

  void apply_hat(std::span<const cplx> in, std::span<cplx> out) const;
  std::vector<cplx> apply_hat(std::span<const cplx> in) const;
  void apply_hat_adjoint(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  void apply_with(std::span<const cplx> in, std::span<cplx> out, const std::vector<Eigen::MatrixXcd>& left,
                  const std::vector<Eigen::MatrixXcd>& right) const;

  UnitaryFamily family_;
  std::vector<Eigen::MatrixXcd> conj_, adjoint_, transpose_;
  std::size_t k_;
  std::size_t dim_;
};

// All permutations of {0..k-1} in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t k);

// Row-major vec of P_N(pi) = sum |i_1..i_k><i_pi(1)..i_pi(k)| (0/1 entries).
std::vector<double> perm_operator_vec(std::size_t n, const Permutation& pi);

struct PermOperatorGram {
  std::vector<Permutation> perms;  // index order of the Gram matrix
  Eigen::MatrixXd gram;            // gram(a, b) = N^{cycles(perms[a]^-1 perms[b])}
  Eigen::VectorXd eigenvalues;     // ascending
  std::size_t rank = 0;            // eigenvalues above 1e-8 * max
};

// Throws InvalidArgument for k > 6.
PermOperatorGram perm_operator_gram(std::size_t n, std::size_t k);

// Orthonormal basis of span{vec(P_N(pi))}, built from the Gram eigenvectors
// with rank truncation. Columns are real.
class TwirlBasis {
 public:
  TwirlBasis(std::size_t n, std::size_t k, std::size_t dim_cap = kDefaultDimCap);

  std::size_t count() const { return static_cast<std::size_t>(basis_.cols()); }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.rows()); }
  const Eigen::MatrixXd& matrix() const { return basis_; }

  void project_out(std::span<cplx> v) const;
  std::vector<std::vector<cplx>> vectors() const;

 private:
  Eigen::MatrixXd basis_;
};

std::vector<std::vector<cplx>> twirl_basis(std::size_t n, std::size_t k, std::size_t dim_cap = kDefaultDimCap);

SpectralReport lambda_estimate_quantum(const QuantumTpeOperator& op, const SolverOptions& options,
                                       RngStream& stream);

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Monte-Carlo estimate of E[(tr X tr X^†)^k] over Haar X. Sample i draws
// from stream.split(i).
MomentEstimate trace_moment_mc(std::size_t n, std::size_t k, std::size_t samples, const RngStream& stream);

// 2N - 2|tr U^† V|: the squared Hilbert-Schmidt distance minimized over a
// global phase.
double phase_invariant_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

struct OverlapCheck {
  double lhs = 0.0;  // tr rho(U) rho(V), from explicit density matrices
  double rhs = 0.0;  // (1 - d(U,V) / 2N)^{2k}
  double gap = 0.0;
};

// rho(U) = [(U ⊗ I) Phi (U^† ⊗ I)]^{⊗k} with Phi the maximally entangled
// state. Throws CapExceeded when N^{2k} > cap.
OverlapCheck sk_overlap_check(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v, std::size_t k,
                              std::size_t cap = 4096);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace tpe
