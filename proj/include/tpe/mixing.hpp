#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpe/channel.hpp"
#include "tpe/classical_tpe.hpp"
#include "tpe/quantum_tpe.hpp"

namespace tpe {

struct MixingStep {
  std::size_t m = 0;
  double l2 = 0.0;
  double l1 = 0.0;
  double bound_l2 = 0.0;
  double bound_l1 = 0.0;
  bool violated = false;
};

struct MixingTrace {
  std::string construction;
  std::size_t n = 0;
  std::size_t degree = 0;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  // lambda used for the bounds; absent means no bound columns were checked.
  std::optional<double> lambda_ref;
  // Set when lambda_ref >= 1, where the bounds carry no information.
  bool bound_uninformative = false;
  std::vector<MixingStep> steps;

  bool any_violation() const;
};

// Absolute slack added to every bound comparison.
inline constexpr double kMixingSlack = 1e-10;

// ||A||_1 from the eigenvalues of a Hermitian matrix.
double trace_norm_hermitian(const Eigen::MatrixXcd& a);

// Throws InvalidArgument unless rho is Hermitian, PSD and of unit trace (1e-8).
void check_density_matrix(const Eigen::MatrixXcd& rho);

// Records ||E^m(rho) - I/N||_2 and ||.||_1 for m = 0..steps. With lambda set,
// bound_l2 = lambda^m and bound_l1 = sqrt(N) lambda^m.
MixingTrace iterate_channel(const KrausChannel& ch, const Eigen::MatrixXcd& rho0, std::size_t steps,
                            std::optional<double> lambda = std::nullopt);

// Uniform distribution over equality-pattern class `label`.
std::vector<double> class_uniform(const PartitionClasses& classes, std::size_t label);

// l1 distance of L_k^m p to the uniform distribution on the class holding
// p's support. With lambda set, bound_l1 = sqrt(N^k) lambda^m and
// bound_l2 = lambda^m. Throws InvalidArgument when p is not a distribution or
// its support spans several classes.
MixingTrace iterate_classical(const ClassicalTpeOperator& op, const std::vector<double>& p0, std::size_t steps,
                              std::optional<double> lambda = std::nullopt);

// Smallest m >= 0 with lambda^m <= eps / sqrt(N).
std::size_t required_iterations(double lambda, std::size_t n, double eps);

struct WordCount {
  std::optional<std::uint64_t> value;  // D^m when it fits in 64 bits
  std::string decimal;                 // always exact
};

WordCount word_count(std::uint64_t degree, std::uint64_t m);

// (1/2) log(D) / log(1/lambda).
double word_count_exponent(std::size_t degree, double lambda);

struct StateRandomization {
  std::size_t m = 0;
  std::size_t trials = 0;
  double worst_l1 = 0.0;
  // sqrt(N) lambda^m when lambda was supplied.
  std::optional<double> implied_epsilon;
};

// Pure input i is a normalized complex Gaussian vector drawn from
// stream.split(i); each is pushed through the m-fold mixture channel.
// Throws CapExceeded for N > 64.
StateRandomization state_random_experiment(const UnitaryFamily& family, std::size_t m, std::size_t trials,
                                           const RngStream& stream, std::optional<double> lambda = std::nullopt);

Eigen::MatrixXcd random_pure_state(std::size_t n, RngStream& stream);

}  // namespace tpe
