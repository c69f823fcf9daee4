#include "tpe/classical_tpe.hpp"

#include <algorithm>
#include <cmath>

#include "tpe/errors.hpp"

namespace tpe {

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > cap / base) {
      throw CapExceeded("dimension " + std::to_string(base) + "^" + std::to_string(exponent) +
                        " exceeds cap " + std::to_string(cap));
    }
    result *= base;
  }
  if (result > cap) {
    throw CapExceeded("dimension " + std::to_string(result) + " exceeds cap " + std::to_string(cap));
  }
  return result;
}

ClassicalTpeOperator::ClassicalTpeOperator(PermutationFamily family, std::size_t k, std::size_t dim_cap)
    : family_(std::move(family)), k_(k) {
  if (k_ == 0) throw InvalidArgument("ClassicalTpeOperator: k must be at least 1");
  family_.validate();
  dim_ = checked_power(family_.size(), k_, dim_cap);
  inverses_.reserve(family_.degree());
  for (const auto& p : family_.members) inverses_.push_back(inverse(p));
}

void ClassicalTpeOperator::gather(std::span<const double> in, std::span<double> out,
                                  const std::vector<Permutation>& sources) const {
  if (in.size() != dim_ || out.size() != dim_) {
    throw DimensionMismatch("ClassicalTpeOperator: vector length " + std::to_string(in.size()) +
                            " does not match N^k = " + std::to_string(dim_));
  }
  const std::size_t n = family_.size();
  std::fill(out.begin(), out.end(), 0.0);

  std::vector<std::size_t> strides(k_);
  for (std::size_t i = 0; i < k_; ++i) strides[i] = (i == 0) ? dim_ / n : strides[i - 1] / n;

  std::vector<std::uint32_t> digits;
  for (const auto& p : sources) {
    const auto img = p.images();
    if (k_ == 1) {
      for (std::size_t m = 0; m < n; ++m) out[m] += in[img[m]];
      continue;
    }
    // Odometer over the first k-1 digits; the last digit is the inner loop.
    digits.assign(k_ - 1, 0);
    std::size_t prefix = 0;
    for (std::size_t i = 0; i + 1 < k_; ++i) prefix += img[0] * strides[i];
    const std::size_t blocks = dim_ / n;
    for (std::size_t block = 0; block < blocks; ++block) {
      double* dst = out.data() + block * n;
      const double* src = in.data() + prefix;
      for (std::size_t j = 0; j < n; ++j) dst[j] += src[img[j]];
      for (std::size_t i = k_ - 1; i-- > 0;) {
        prefix -= img[digits[i]] * strides[i];
        if (++digits[i] < n) {
          prefix += img[digits[i]] * strides[i];
          break;
        }
        digits[i] = 0;
        prefix += img[0] * strides[i];
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(sources.size());
  for (double& x : out) x *= scale;
}

void ClassicalTpeOperator::apply(std::span<const double> in, std::span<double> out) const {
  // (P v)[pi(j)] = v[j], so each output entry reads from the inverse image.
  gather(in, out, inverses_);
}

std::vector<double> ClassicalTpeOperator::apply(std::span<const double> in) const {
  std::vector<double> out(dim_);
  apply(in, out);
  return out;
}

void ClassicalTpeOperator::apply_transpose(std::span<const double> in, std::span<double> out) const {
  gather(in, out, family_.members);
}

PartitionClasses::PartitionClasses(std::size_t n, std::size_t k, std::size_t dim_cap) : n_(n), k_(k) {
  if (n == 0 || k == 0) throw InvalidArgument("PartitionClasses: N and k must be positive");
  const std::size_t dim = checked_power(n, k, dim_cap);
  partitions_ = enumerate_partitions(k, n);

  // Restricted-growth strings in lexicographic order are increasing base-k codes.
  std::vector<std::uint64_t> codes;
  codes.reserve(partitions_.size());
  for (const auto& part : partitions_) {
    std::uint64_t code = 0;
    for (auto b : part.block_id) code = code * k + b;
    codes.push_back(code);
  }

  labels_.resize(dim);
  sizes_.assign(partitions_.size(), 0);
  std::vector<std::uint32_t> digits(k, 0), pattern(k);
  for (std::size_t index = 0; index < dim; ++index) {
    equality_pattern(digits, pattern);
    std::uint64_t code = 0;
    for (auto b : pattern) code = code * k + b;
    const auto it = std::lower_bound(codes.begin(), codes.end(), code);
    const auto label = static_cast<std::uint32_t>(it - codes.begin());
    labels_[index] = label;
    ++sizes_[label];
    for (std::size_t i = k; i-- > 0;) {
      if (++digits[i] < n) break;
      digits[i] = 0;
    }
  }
}

void PartitionClasses::project_out(std::span<double> v) const {
  if (v.size() != labels_.size()) throw DimensionMismatch("PartitionClasses::project_out: length mismatch");
  std::vector<double> sums(partitions_.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) sums[labels_[i]] += v[i];
  for (std::size_t a = 0; a < sums.size(); ++a) sums[a] /= static_cast<double>(sizes_[a]);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= sums[labels_[i]];
}

std::vector<std::vector<double>> PartitionClasses::vectors() const {
  std::vector<std::vector<double>> out(partitions_.size(), std::vector<double>(labels_.size(), 0.0));
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out[labels_[i]][i] = 1.0 / std::sqrt(static_cast<double>(sizes_[labels_[i]]));
  }
  return out;
}

std::vector<std::vector<double>> trivial_basis(std::size_t n, std::size_t k, std::size_t dim_cap) {
  return PartitionClasses(n, k, dim_cap).vectors();
}

namespace {

DeflatedOperator<double> make_deflated(const ClassicalTpeOperator& op, const PartitionClasses& classes) {
  DeflatedOperator<double> d;
  d.dim = op.dim();
  d.apply = [&op](std::span<const double> in, std::span<double> out) { op.apply(in, out); };
  d.apply_adjoint = [&op](std::span<const double> in, std::span<double> out) { op.apply_transpose(in, out); };
  d.project_out = [&classes](std::span<double> v) { classes.project_out(v); };
  d.trivial_count = classes.count();
  d.hermitian = op.family().hermitian;
  return d;
}

}  // namespace

SpectralReport lambda_estimate(const ClassicalTpeOperator& op, const SolverOptions& options, RngStream& stream) {
  if (options.mode == SpectralMode::eigen && !op.family().hermitian) {
    throw NotHermitian("eigen mode requires a Hermitian family; use singular mode");
  }
  const PartitionClasses classes(op.n(), op.k(), op.dim());
  SpectralReport report = solve_deflated(make_deflated(op, classes), options, stream);
  report.construction = std::string(to_string(op.family().construction));
  report.n = op.n();
  report.degree = op.degree();
  report.k = op.k();
  report.seed = op.family().seed;
  report.lambda_h = ramanujan_reference(op.degree());
  return report;
}

UnitMultiplicity unit_multiplicity(const ClassicalTpeOperator& op, double tol, std::size_t dense_cap,
                                   std::uint64_t seed) {
  const PartitionClasses classes(op.n(), op.k(), op.dim());
  const auto deflated = make_deflated(op, classes);
  UnitMultiplicity result;
  if (op.dim() <= dense_cap) {
    const auto m = assemble_dense(deflated);
    result.count = count_unit_eigenvalues<double>(m, tol);
    result.dense = true;
    result.certified = true;
    return result;
  }

  std::vector<double> image(op.dim());
  for (const auto& u : classes.vectors()) {
    op.apply(u, image);
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) err += (image[i] - u[i]) * (image[i] - u[i]);
    if (std::sqrt(err) > 1e-10) {
      throw Error("partition vector is not fixed by L_k (residual " + std::to_string(std::sqrt(err)) + ")");
    }
  }
  SolverOptions options;
  options.oracle = Oracle::iterative;
  options.mode = op.family().hermitian ? SpectralMode::eigen : SpectralMode::singular;
  RngStream stream(seed);
  const auto report = solve_deflated(deflated, options, stream);
  result.count = classes.count();
  result.deflated_radius = report.lambda;
  result.certified = report.converged && report.lambda < 1.0 - tol;
  return result;
}

}  // namespace tpe
