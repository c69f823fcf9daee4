#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tpe/rng.hpp"

namespace tpe {

// A bijection on {0, ..., N-1}, stored by images: p(i) = images[i].
// The associated permutation matrix has P_{ij} = 1 iff p(j) = i.
class Permutation {
 public:
  Permutation() = default;

  // Throws InvalidArgument unless `images` is a bijection on {0..N-1}.
  explicit Permutation(std::vector<std::uint32_t> images);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return images_.size(); }
  std::uint32_t operator()(std::size_t i) const { return images_[i]; }
  std::span<const std::uint32_t> images() const { return images_; }

  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::uint32_t> images_;
};

Permutation random_permutation(std::size_t n, RngStream& stream);

// (a ∘ b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);

Permutation inverse(const Permutation& p);

// Number of disjoint cycles, fixed points included.
std::size_t cycle_count(const Permutation& p);

enum class Construction { random_hermitian, matching, doubled, cayley, explicit_list };

std::string_view to_string(Construction c);
Construction construction_from_string(std::string_view name);

// The classical expander datum: D permutations of the same ground set.
struct PermutationFamily {
  std::vector<Permutation> members;
  // members[s + D/2] == inverse(members[s]) for s < D/2 (or every member is
  // an involution for matching families).
  bool hermitian = false;
  std::uint64_t seed = 0;
  Construction construction = Construction::explicit_list;

  std::size_t size() const { return members.empty() ? 0 : members.front().size(); }
  std::size_t degree() const { return members.size(); }

  // Throws InvalidArgument if any structural invariant fails.
  void validate() const;
};

// True iff members[s + D/2] ∘ members[s] is the identity for every s < D/2.
bool has_inverse_pairing(std::span<const Permutation> members);

PermutationFamily hermitian_family(std::size_t n, std::size_t degree, RngStream& stream);

// Uniformly random fixed-point-free involution on an even number of points.
Permutation random_matching(std::size_t n, RngStream& stream);

PermutationFamily matching_family(std::size_t n, std::size_t degree, RngStream& stream);

// Block-doubled copies of every base member on 2N points, followed by the
// copy swap i <-> i + N. Marked non-Hermitian.
PermutationFamily doubled_counterexample(const PermutationFamily& base);

// Multiplication table of a finite group: table[a][b] = a * b.
struct GroupTable {
  std::vector<std::vector<std::uint32_t>> table;

  std::size_t order() const { return table.size(); }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const { return table[a][b]; }

  // Brute-force check of closure, identity, inverses and associativity.
  // Throws InvalidGroup naming the failed axiom. Orders above 64 are rejected.
  void validate() const;
  std::uint32_t identity_element() const;
  std::uint32_t inverse_of(std::uint32_t g) const;
};

GroupTable cyclic_group(std::size_t n);

// Member s is left multiplication g -> generators[s] * g.
PermutationFamily cayley_family(const GroupTable& group, std::span<const std::uint32_t> generators);

}  // namespace tpe
