#include "tpe/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "tpe/errors.hpp"

namespace tpe {

Permutation::Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (std::uint32_t v : images_) {
    if (v >= images_.size() || seen[v]) {
      throw InvalidArgument("permutation images are not a bijection on {0..N-1}");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 0u);
  return Permutation(std::move(images));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Permutation random_permutation(std::size_t n, RngStream& stream) {
  if (n == 0) throw InvalidSize("random_permutation: N must be at least 1");
  std::vector<std::uint32_t> images(n);
  std::iota(images.begin(), images.end(), 0u);
  // Fisher-Yates, high index down.
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(stream.uniform_below(i + 1));
    std::swap(images[i], images[j]);
  }
  return Permutation(std::move(images));
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw DimensionMismatch("compose: permutations act on different sets");
  std::vector<std::uint32_t> images(a.size());
  for (std::size_t i = 0; i < images.size(); ++i) images[i] = a(b(i));
  return Permutation(std::move(images));
}

Permutation inverse(const Permutation& p) {
  std::vector<std::uint32_t> images(p.size());
  for (std::size_t i = 0; i < images.size(); ++i) images[p(i)] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(images));
}

std::size_t cycle_count(const Permutation& p) {
  std::vector<bool> visited(p.size(), false);
  std::size_t cycles = 0;
  for (std::size_t start = 0; start < p.size(); ++start) {
    if (visited[start]) continue;
    ++cycles;
    for (std::size_t i = start; !visited[i]; i = p(i)) visited[i] = true;
  }
  return cycles;
}

std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::random_hermitian: return "random-hermitian";
    case Construction::matching: return "matching";
    case Construction::doubled: return "doubled";
    case Construction::cayley: return "cayley";
    case Construction::explicit_list: return "explicit";
  }
  return "explicit";
}

Construction construction_from_string(std::string_view name) {
  for (auto c : {Construction::random_hermitian, Construction::matching, Construction::doubled,
                 Construction::cayley, Construction::explicit_list}) {
    if (to_string(c) == name) return c;
  }
  throw InvalidArgument("unknown construction tag '" + std::string(name) + "'");
}

bool has_inverse_pairing(std::span<const Permutation> members) {
  if (members.size() % 2 != 0) return false;
  const std::size_t half = members.size() / 2;
  for (std::size_t s = 0; s < half; ++s) {
    if (!compose(members[s + half], members[s]).is_identity()) return false;
  }
  return true;
}

namespace {

bool is_fixed_point_free_involution(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p(i) == i || p(p(i)) != i) return false;
  }
  return true;
}

}  // namespace

void PermutationFamily::validate() const {
  if (members.empty()) throw InvalidArgument("family has no members");
  const std::size_t n = size();
  for (const auto& m : members) {
    if (m.size() != n) throw InvalidArgument("family members act on different ground sets");
  }
  if (construction == Construction::matching) {
    for (const auto& m : members) {
      if (!is_fixed_point_free_involution(m)) {
        throw InvalidArgument("matching family member is not a fixed-point-free involution");
      }
    }
  } else if (hermitian && !has_inverse_pairing(members)) {
    throw InvalidArgument("family is flagged hermitian but members[s + D/2] != members[s]^-1");
  }
}

PermutationFamily hermitian_family(std::size_t n, std::size_t degree, RngStream& stream) {
  if (degree % 2 != 0 || degree < 4) {
    throw InvalidDegree("hermitian_family: degree must be even and at least 4");
  }
  if (n < 2) throw InvalidSize("hermitian_family: N must be at least 2");
  PermutationFamily family;
  family.hermitian = true;
  family.seed = stream.seed();
  family.construction = Construction::random_hermitian;
  const std::size_t half = degree / 2;
  family.members.reserve(degree);
  for (std::size_t s = 0; s < half; ++s) family.members.push_back(random_permutation(n, stream));
  for (std::size_t s = 0; s < half; ++s) family.members.push_back(inverse(family.members[s]));
  return family;
}

Permutation random_matching(std::size_t n, RngStream& stream) {
  if (n == 0 || n % 2 != 0) throw InvalidSize("random_matching: N must be even and positive");
  std::vector<std::uint32_t> unmatched(n);
  std::iota(unmatched.begin(), unmatched.end(), 0u);
  std::vector<std::uint32_t> images(n);
  while (!unmatched.empty()) {
    // Pick a uniform unmatched point, remove it, then a uniform partner.
    auto take = [&] {
      const auto idx = static_cast<std::size_t>(stream.uniform_below(unmatched.size()));
      const std::uint32_t v = unmatched[idx];
      unmatched[idx] = unmatched.back();
      unmatched.pop_back();
      return v;
    };
    const std::uint32_t a = take();
    const std::uint32_t b = take();
    images[a] = b;
    images[b] = a;
  }
  return Permutation(std::move(images));
}

PermutationFamily matching_family(std::size_t n, std::size_t degree, RngStream& stream) {
  if (n == 0 || n % 2 != 0) throw InvalidSize("matching_family: N must be even and positive");
  if (degree == 0) throw InvalidDegree("matching_family: degree must be positive");
  PermutationFamily family;
  family.hermitian = true;
  family.seed = stream.seed();
  family.construction = Construction::matching;
  for (std::size_t s = 0; s < degree; ++s) family.members.push_back(random_matching(n, stream));
  return family;
}

PermutationFamily doubled_counterexample(const PermutationFamily& base) {
  const std::size_t n = base.size();
  if (n == 0) throw InvalidSize("doubled_counterexample: empty base family");
  PermutationFamily out;
  out.seed = base.seed;
  out.hermitian = false;
  out.construction = Construction::doubled;
  for (const auto& p : base.members) {
    std::vector<std::uint32_t> images(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      images[i] = p(i);
      images[i + n] = static_cast<std::uint32_t>(p(i) + n);
    }
    out.members.emplace_back(std::move(images));
  }
  std::vector<std::uint32_t> swap(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    swap[i] = static_cast<std::uint32_t>(i + n);
    swap[i + n] = static_cast<std::uint32_t>(i);
  }
  out.members.emplace_back(std::move(swap));
  return out;
}

void GroupTable::validate() const {
  const std::size_t n = order();
  if (n == 0) throw InvalidGroup("group table is empty");
  if (n > 64) throw InvalidGroup("group validation is capped at order 64");
  for (const auto& row : table) {
    if (row.size() != n) throw InvalidGroup("closure: table is not square");
    for (auto v : row) {
      if (v >= n) throw InvalidGroup("closure: product outside the group");
    }
  }
  std::size_t e = n;
  for (std::size_t cand = 0; cand < n && e == n; ++cand) {
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g) ok = table[cand][g] == g && table[g][cand] == g;
    if (ok) e = cand;
  }
  if (e == n) throw InvalidGroup("identity: no two-sided identity element");
  for (std::size_t g = 0; g < n; ++g) {
    bool found = false;
    for (std::size_t h = 0; h < n && !found; ++h) found = table[g][h] == e && table[h][g] == e;
    if (!found) throw InvalidGroup("inverses: element " + std::to_string(g) + " has no inverse");
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw InvalidGroup("associativity fails for (" + std::to_string(a) + ", " +
                             std::to_string(b) + ", " + std::to_string(c) + ")");
        }
      }
    }
  }
}

std::uint32_t GroupTable::identity_element() const {
  for (std::uint32_t cand = 0; cand < order(); ++cand) {
    bool ok = true;
    for (std::uint32_t g = 0; g < order() && ok; ++g) ok = table[cand][g] == g;
    if (ok) return cand;
  }
  throw InvalidGroup("identity: no identity element");
}

std::uint32_t GroupTable::inverse_of(std::uint32_t g) const {
  const auto e = identity_element();
  for (std::uint32_t h = 0; h < order(); ++h) {
    if (table[g][h] == e) return h;
  }
  throw InvalidGroup("inverses: element " + std::to_string(g) + " has no inverse");
}

GroupTable cyclic_group(std::size_t n) {
  if (n == 0) throw InvalidSize("cyclic_group: order must be positive");
  GroupTable g;
  g.table.assign(n, std::vector<std::uint32_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) g.table[a][b] = static_cast<std::uint32_t>((a + b) % n);
  }
  return g;
}

PermutationFamily cayley_family(const GroupTable& group, std::span<const std::uint32_t> generators) {
  group.validate();
  if (generators.empty()) throw InvalidDegree("cayley_family: at least one generator required");
  PermutationFamily family;
  family.construction = Construction::cayley;
  const std::size_t n = group.order();
  for (auto g : generators) {
    if (g >= n) throw InvalidArgument("cayley_family: generator index outside the group");
    std::vector<std::uint32_t> images(n);
    for (std::size_t h = 0; h < n; ++h) images[h] = group.multiply(g, static_cast<std::uint32_t>(h));
    family.members.emplace_back(std::move(images));
  }
  family.hermitian = has_inverse_pairing(family.members);
  return family;
}

}  // namespace tpe
