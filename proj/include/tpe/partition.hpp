#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tpe {

// Set partition of {0..k-1} in restricted-growth form: block_id[0] = 0 and
// every block_id[i] is at most one more than the maximum before it.
struct Partition {
  std::vector<std::uint32_t> block_id;
  std::size_t block_count = 0;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// All partitions of a k-element set into at most max_blocks blocks, in
// lexicographic order of their restricted-growth strings.
std::vector<Partition> enumerate_partitions(std::size_t k, std::size_t max_blocks);

// Stirling number of the second kind S(n, j). Throws on 64-bit overflow.
std::uint64_t stirling2(std::size_t n, std::size_t j);

// Number of partitions of {1..k} into at most N blocks (the Bell number B_k
// once N >= k).
std::uint64_t f_count(std::size_t n, std::size_t k);

std::uint64_t bell_number(std::size_t k);

// Canonical restricted-growth string of a tuple's equality pattern:
// out[i] = out[j] iff tuple[i] = tuple[j].
void equality_pattern(std::span<const std::uint32_t> tuple, std::span<std::uint32_t> out);

}  // namespace tpe
