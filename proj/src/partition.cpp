#include "tpe/partition.hpp"

#include <algorithm>

#include "tpe/errors.hpp"

namespace tpe {

namespace {

void extend(std::vector<std::uint32_t>& rgs, std::size_t pos, std::uint32_t max_so_far,
            std::size_t max_blocks, std::vector<Partition>& out) {
  if (pos == rgs.size()) {
    out.push_back(Partition{rgs, static_cast<std::size_t>(max_so_far) + 1});
    return;
  }
  const std::uint32_t limit = std::min<std::uint32_t>(max_so_far + 1, static_cast<std::uint32_t>(max_blocks - 1));
  for (std::uint32_t b = 0; b <= limit; ++b) {
    rgs[pos] = b;
    extend(rgs, pos + 1, std::max(max_so_far, b), max_blocks, out);
  }
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw InvalidArgument("partition count overflows 64 bits");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw InvalidArgument("partition count overflows 64 bits");
  return r;
}

}  // namespace

std::vector<Partition> enumerate_partitions(std::size_t k, std::size_t max_blocks) {
  std::vector<Partition> out;
  if (k == 0 || max_blocks == 0) return out;
  std::vector<std::uint32_t> rgs(k, 0);
  extend(rgs, 1, 0, max_blocks, out);
  return out;
}

std::uint64_t stirling2(std::size_t n, std::size_t j) {
  if (j > n) return 0;
  if (n == 0) return 1;  // S(0,0)
  if (j == 0) return 0;
  // S(m, i) = i S(m-1, i) + S(m-1, i-1), one row at a time.
  std::vector<std::uint64_t> row(j + 1, 0);
  row[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    for (std::size_t i = std::min(m, j); i >= 1; --i) {
      row[i] = checked_add(checked_mul(i, row[i]), row[i - 1]);
    }
    row[0] = 0;
  }
  return row[j];
}

std::uint64_t f_count(std::size_t n, std::size_t k) {
  if (k == 0 || n == 0) throw InvalidArgument("f_count: N and k must be positive");
  std::uint64_t total = 0;
  for (std::size_t j = 1; j <= std::min(n, k); ++j) total = checked_add(total, stirling2(k, j));
  return total;
}

std::uint64_t bell_number(std::size_t k) { return k == 0 ? 1 : f_count(k, k); }

void equality_pattern(std::span<const std::uint32_t> tuple, std::span<std::uint32_t> out) {
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    std::size_t j = 0;
    while (j < i && tuple[j] != tuple[i]) ++j;
    out[i] = (j < i) ? out[j] : next++;
  }
}

}  // namespace tpe
