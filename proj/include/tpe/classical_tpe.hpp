#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tpe/partition.hpp"
#include "tpe/permutation.hpp"
#include "tpe/spectral.hpp"

namespace tpe {

// The averaged k-copy permutation action L_k = (1/D) sum_s P(s)^{⊗k} on
// real vectors of length N^k.
//
// k-tuples (n_1, ..., n_k) are mixed-radix integers with n_1 the most
// significant digit: index = ((n_1 N + n_2) N + ...) N + n_k.
class ClassicalTpeOperator {
 public:
  ClassicalTpeOperator(PermutationFamily family, std::size_t k, std::size_t dim_cap = kDefaultDimCap);

  const PermutationFamily& family() const { return family_; }
  std::size_t n() const { return family_.size(); }
  std::size_t degree() const { return family_.degree(); }
  std::size_t k() const { return k_; }
  std::size_t dim() const { return dim_; }

  // out = L_k in. Each output entry sums its D sources in member order.
  void apply(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> in) const;

  // out = L_k^T in (averages the inverse permutations).
  void apply_transpose(std::span<const double> in, std::span<double> out) const;

 private:
  void gather(std::span<const double> in, std::span<double> out, const std::vector<Permutation>& sources) const;

  PermutationFamily family_;
  std::vector<Permutation> inverses_;
  std::size_t k_;
  std::size_t dim_;
};

// Equality-pattern classes of the N^k tuples. Class a holds every tuple whose
// pattern is partitions()[a]; its normalized indicator is the a-th trivial
// unit eigenvector shared by every L_k.
class PartitionClasses {
 public:
  PartitionClasses(std::size_t n, std::size_t k, std::size_t dim_cap = kDefaultDimCap);

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t dim() const { return labels_.size(); }
  std::size_t count() const { return partitions_.size(); }
  const std::vector<Partition>& partitions() const { return partitions_; }
  std::uint32_t label(std::size_t index) const { return labels_[index]; }
  std::size_t class_size(std::size_t a) const { return sizes_[a]; }

  // Removes the component of v in the trivial space (subtracts each class mean).
  void project_out(std::span<double> v) const;

  // Explicit orthonormal basis vectors, one per class.
  std::vector<std::vector<double>> vectors() const;

 private:
  std::size_t n_, k_;
  std::vector<Partition> partitions_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::size_t> sizes_;
};

std::vector<std::vector<double>> trivial_basis(std::size_t n, std::size_t k, std::size_t dim_cap = kDefaultDimCap);

// Leading nontrivial |eigenvalue| (eigen mode) or singular value of L_k.
SpectralReport lambda_estimate(const ClassicalTpeOperator& op, const SolverOptions& options, RngStream& stream);

struct UnitMultiplicity {
  std::size_t count = 0;
  // Dense: always true. Structural: the deflated radius is below 1 - tol.
  bool certified = false;
  bool dense = false;
  double deflated_radius = 0.0;
};

// Dense route when N^k <= dense_cap, otherwise the structural route (check
// every partition vector is fixed, then bound the deflated radius).
UnitMultiplicity unit_multiplicity(const ClassicalTpeOperator& op, double tol,
                                   std::size_t dense_cap = kDefaultDenseCap, std::uint64_t seed = 0);

// Integer power with an overflow/cap check; throws CapExceeded.
std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap);

}  // namespace tpe
