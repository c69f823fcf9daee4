#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "tpe/permutation.hpp"
#include "tpe/quantum_tpe.hpp"
#include "tpe/spectral.hpp"

namespace tpe {

enum class ChannelTag { unitary_mixture, sign, z_phase, z_phase_hermitian, explicit_kraus };

std::string_view to_string(ChannelTag t);
ChannelTag channel_tag_from_string(std::string_view s);

// E(M) = sum_s A(s)^† M A(s).
struct KrausChannel {
  std::vector<Eigen::MatrixXcd> kraus;
  ChannelTag tag = ChannelTag::explicit_kraus;
  // The Kraus set is closed under adjoints, so the superoperator is Hermitian.
  bool hermitian = false;

  std::size_t size() const { return kraus.empty() ? 0 : static_cast<std::size_t>(kraus.front().rows()); }

  // Shapes, trace preservation to 1e-10, the hermitian flag (adjoint closure)
  // and, for the sign tag, signed-permutation structure of sqrt(D) A(s).
  void validate() const;
};

// max |(sum A A^† - I)_ij|: trace preservation for E(M) = sum A^† M A.
double trace_preservation_residual(const KrausChannel& ch);
// max |(sum A^† A - I)_ij|: E(I) = I.
double unitality_residual(const KrausChannel& ch);

// 0/1 matrix with P(pi(j), j) = 1.
Eigen::MatrixXd permutation_matrix(const Permutation& p);

// Kraus operators U(s)^† / sqrt(D), so that E(rho) = (1/D) sum U rho U^†.
KrausChannel unitary_mixture(const UnitaryFamily& family);

// Per-s diagonal signs for s < D/2. Sign i of block s is the i-th fair bit
// of stream.split(s).
std::vector<std::vector<int>> sign_diagonals(std::size_t n, std::size_t half_degree, const RngStream& stream);

// A(s) = P(s) sigma(s) / sqrt(D) with sigma(s + D/2) = P(s) sigma(s) P(s)^†.
// Throws InvalidArgument when the family is not Hermitian.
KrausChannel sign_expander(const PermutationFamily& family, const RngStream& stream);

// Z = diag(exp(2 pi i j / N)), j = 0..N-1.
Eigen::MatrixXcd z_phase_matrix(std::size_t n);

// p = 1/(1+eps); Kraus set sqrt(p/D) P(s) plus sqrt(1-p) Z, or, for the
// Hermitian variant, sqrt((1-p)/2) Z and sqrt((1-p)/2) Z^†.
KrausChannel z_phase_expander(const PermutationFamily& family, double epsilon, bool hermitian_variant);

// Throws DimensionMismatch on shape errors. Hermitian inputs give exactly
// Hermitian outputs.
Eigen::MatrixXcd channel_apply(const KrausChannel& ch, const Eigen::MatrixXcd& rho);
// E^†(M) = sum A M A^†.
Eigen::MatrixXcd channel_apply_adjoint(const KrausChannel& ch, const Eigen::MatrixXcd& rho);

// Superoperator on row-major vec(M), length N^2.
void superoperator_apply(const KrausChannel& ch, std::span<const cplx> in, std::span<cplx> out);
void superoperator_apply_adjoint(const KrausChannel& ch, std::span<const cplx> in, std::span<cplx> out);
Eigen::MatrixXcd dense_superoperator(const KrausChannel& ch);

// Leading magnitude off vec(I)/sqrt(N). Throws InvalidArgument for a
// non-unital channel, NotHermitian for eigen mode on a non-Hermitian one.
SpectralReport channel_gap(const KrausChannel& ch, const SolverOptions& options, RngStream& stream);

// 1 - lambda(L_2); singular mode unless the family is Hermitian. Dense when
// N^2 <= options.dense_cap.
double measure_2tpe_epsilon(const PermutationFamily& family, const SolverOptions& options, RngStream& stream);
double measure_2tpe_epsilon(const PermutationFamily& family);

// T(j, l) = E(|l><l|)(j, j): the action on diagonal matrices.
Eigen::MatrixXd diagonal_sector_matrix(const KrausChannel& ch);

// <phi2| Z ⊗ Z^* |phi2> with phi2 the normalized sum over i != j of |i>|j>.
double phi2_z_overlap(std::size_t n);

}  // namespace tpe
