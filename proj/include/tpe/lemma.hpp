#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

#include "tpe/permutation.hpp"
#include "tpe/rng.hpp"

namespace tpe {

// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& m);

// How Y is built by sample_lemma_instance.
//   blend:     (1 - eps_y) G + eps_y H, with ||Pi G Pi|| = 1 and Pi H Pi = 0.
//   rescaled:  Haar-rotated contraction with its Pi block rescaled to
//              norm 1 - eps_y, shrunk back into the unit ball if needed.
//   extremal:  a 2x2 Hermitian unitary [[a, b], [b, -a]], a = 1 - eps_y,
//              mixing one vector of Pi with one outside it.
enum class YStrategy { blend, rescaled, extremal };

std::string_view to_string(YStrategy s);

struct LemmaInstance {
  std::size_t dim = 0;
  std::size_t rank_pi = 0;
  Eigen::MatrixXcd pi, x, y;
  double eps_x = 0.0;
  double eps_y = 0.0;
  double p = 0.0;

  // Residuals of the hypotheses; all must be <= 1e-10.
  struct Residuals {
    double x_norm_excess = 0.0;        // max(0, ||X|| - 1)
    double y_norm_excess = 0.0;        // max(0, ||Y|| - 1)
    double pi_fixed = 0.0;             // max(||Pi X - Pi||, ||X Pi - Pi||)
    double x_complement_excess = 0.0;  // max(0, ||(I-Pi) X (I-Pi)|| - (1 - eps_x))
    double y_block_excess = 0.0;       // max(0, ||Pi Y Pi|| - (1 - eps_y))
    double max() const;
  };
  Residuals residuals() const;
};

// Pi is a Haar-rotated rank_pi projector; X = Pi + (I-Pi) X0 (I-Pi) with the
// block norm exactly 1 - eps_x; p defaults to 1/(1+eps_x). Throws
// InvalidArgument for infeasible parameters.
LemmaInstance sample_lemma_instance(std::size_t dim, double eps_x, double eps_y, std::size_t rank_pi,
                                    RngStream& stream, YStrategy strategy = YStrategy::blend);

// The instance used for the z-phase channel: X = (1/D) sum P ⊗ P - phi1,
// Y = Z ⊗ Z^* - phi1, Pi = phi2 on N^2 dimensions. eps_x is computed from
// ||(I-Pi) X (I-Pi)||, eps_y = 1 - 1/(N-1), p = 1/(1+eps_x).
LemmaInstance theorem3_lemma_instance(const PermutationFamily& family);

struct LemmaCheck {
  double norm = 0.0;
  double bound_intermediate = 0.0;  // 1 - (eps_y/12) min(p eps_x, 1-p)
  double bound_mixed = 0.0;         // 1 - eps_x eps_y / 24
  double margin = 0.0;              // bound_intermediate - norm
  bool pass = false;                // norm <= bound_intermediate + 1e-10
};

inline constexpr double kLemmaTolerance = 1e-10;

// Randomized case `index` of the lemma sweep, drawn from stream.split(index):
// dim in 2..8, any admissible rank, all Y strategies, and eps/p taken from
// the corners {1e-6, 1e-3, 1/2, 1-1e-3, 1-1e-6} about a third of the time.
LemmaInstance sample_lemma_case(std::size_t index, const RngStream& stream);

LemmaCheck check_lemma(const LemmaInstance& inst);

}  // namespace tpe
