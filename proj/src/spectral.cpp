#include "tpe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "tpe/errors.hpp"

namespace tpe {

std::string_view to_string(SpectralMode m) { return m == SpectralMode::eigen ? "eigen" : "singular"; }

std::string_view to_string(SolverMethod m) { return m == SolverMethod::power ? "power" : "lanczos"; }

std::string_view to_string(Oracle o) {
  switch (o) {
    case Oracle::automatic: return "auto";
    case Oracle::dense: return "dense";
    case Oracle::iterative: return "iterative";
  }
  return "auto";
}

SpectralMode spectral_mode_from_string(std::string_view s) {
  if (s == "eigen") return SpectralMode::eigen;
  if (s == "singular") return SpectralMode::singular;
  throw InvalidArgument("unknown spectral mode '" + std::string(s) + "'");
}

SolverMethod solver_method_from_string(std::string_view s) {
  if (s == "power") return SolverMethod::power;
  if (s == "lanczos") return SolverMethod::lanczos;
  throw InvalidArgument("unknown solver method '" + std::string(s) + "'");
}

Oracle oracle_from_string(std::string_view s) {
  if (s == "auto") return Oracle::automatic;
  if (s == "dense") return Oracle::dense;
  if (s == "iterative") return Oracle::iterative;
  throw InvalidArgument("unknown oracle '" + std::string(s) + "'");
}

double ramanujan_reference(std::size_t degree) {
  if (degree == 0) return 0.0;
  const double d = static_cast<double>(degree);
  return 2.0 * std::sqrt(d - 1.0) / d;
}

namespace {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
std::span<const Scalar> cspan(const Vec<Scalar>& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

template <class Scalar>
std::span<Scalar> mspan(Vec<Scalar>& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

template <class Scalar>
Scalar random_scalar(RngStream& stream) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return stream.normal();
  } else {
    const double re = stream.normal();
    const double im = stream.normal();
    return {re, im};
  }
}

template <class Scalar>
void store_vector(const Vec<Scalar>& v, SpectralReport& report) {
  if constexpr (std::is_same_v<Scalar, double>) {
    report.vector.assign(v.data(), v.data() + v.size());
    report.vector_is_complex = false;
  } else {
    report.vector.resize(2 * static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      report.vector[2 * i] = v[i].real();
      report.vector[2 * i + 1] = v[i].imag();
    }
    report.vector_is_complex = true;
  }
}

// The operator actually iterated: A (eigen mode) or A^† A (singular mode).
template <class Scalar>
struct IteratedMap {
  const DeflatedOperator<Scalar>& op;
  SpectralMode mode;
  mutable Vec<Scalar> scratch;

  void operator()(const Vec<Scalar>& in, Vec<Scalar>& out) const {
    if (mode == SpectralMode::eigen) {
      op.apply(cspan(in), mspan(out));
    } else {
      scratch.resize(in.size());
      op.apply(cspan(in), mspan(scratch));
      op.project_out(mspan(scratch));
      op.apply_adjoint(cspan(scratch), mspan(out));
    }
    op.project_out(mspan(out));
  }
};

template <class Scalar>
bool random_start(const DeflatedOperator<Scalar>& op, RngStream& stream, Vec<Scalar>& v) {
  v.resize(static_cast<Eigen::Index>(op.dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = random_scalar<Scalar>(stream);
  op.project_out(mspan(v));
  const double nrm = v.norm();
  if (nrm == 0.0 || !std::isfinite(nrm)) return false;
  v /= nrm;
  return true;
}

double window_relative_change(const std::deque<double>& history) {
  const double last = history.back();
  if (last == 0.0) return 0.0;
  double worst = 0.0;
  for (double h : history) worst = std::max(worst, std::abs(h - last) / std::abs(last));
  return worst;
}

// Power iteration with deflation at every step. Converts estimates of the
// iterated operator back to the reported quantity (|lambda| or sigma).
template <class Scalar>
SpectralReport power_iteration(const DeflatedOperator<Scalar>& op, const SolverOptions& options,
                               RngStream& stream) {
  SpectralReport best;
  best.method = "power";
  best.mode = options.mode;
  best.unit_mult = op.trivial_count;
  IteratedMap<Scalar> map{op, options.mode, {}};
  const bool eigen = options.mode == SpectralMode::eigen;
  const std::size_t window = std::max<std::size_t>(options.window, 2);

  std::size_t total_iters = 0;
  for (std::size_t attempt = 0; attempt <= options.restarts; ++attempt) {
    Vec<Scalar> v;
    if (!random_start(op, stream, v)) {
      // Nothing left outside the trivial space.
      best.lambda = best.signed_lambda = 0.0;
      best.converged = true;
      best.iterations = total_iters;
      return best;
    }
    Vec<Scalar> w(v.size()), v_prev;
    double theta_prev = 0.0;
    std::deque<double> history;
    double estimate = 0.0, signed_estimate = 0.0, residual = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (std::size_t it = 1; it <= options.max_iters; ++it) {
      ++total_iters;
      map(v, w);
      const double wn = w.norm();
      if (wn == 0.0) {
        estimate = signed_estimate = 0.0;
        residual = 0.0;
        converged = true;
        break;
      }
      const double rayleigh = std::real(v.dot(w));
      // ||B v|| for unit v; for the A^2 check below we need the previous step.
      estimate = eigen ? wn : std::sqrt(wn);
      signed_estimate = eigen ? (rayleigh < 0 ? -wn : wn) : estimate;
      history.push_back(wn);
      if (history.size() > window) history.pop_front();

      if (history.size() == window && window_relative_change(history) < options.tol) {
        // ||B v - rho v|| with rho the Rayleigh quotient of B.
        double r = (w - rayleigh * v).norm();
        if (eigen && v_prev.size() == v.size() && theta_prev > 0.0) {
          // B^2 v_prev = theta_prev * w: certifies |lambda| even when the
          // top of the spectrum is a +/- pair.
          const double r2 = 0.5 * (w - theta_prev * v_prev).norm();
          r = std::min(r, r2);
        }
        if (!eigen) r /= std::max(2.0 * estimate, std::numeric_limits<double>::min());
        residual = r;
        if (r <= 10.0 * options.tol) {
          if (eigen) signed_estimate = rayleigh;
          estimate = eigen ? std::abs(rayleigh) : std::sqrt(std::max(rayleigh, 0.0));
          if (eigen && std::abs(std::abs(rayleigh) - wn) > 10.0 * options.tol) {
            // +/- pair: the Rayleigh quotient of A is not an eigenvalue.
            estimate = wn;
            signed_estimate = wn;
          }
          converged = true;
          break;
        }
      }
      v_prev = v;
      theta_prev = wn;
      v = w / wn;
    }
    if (attempt == 0 || estimate > best.lambda || converged) {
      best.lambda = estimate;
      best.signed_lambda = signed_estimate;
      best.residual = residual;
      if (options.keep_vector) store_vector(v, best);
    }
    best.converged = converged;
    if (converged) break;
  }
  best.iterations = total_iters;
  return best;
}

// Lanczos on the Hermitian iterated operator without storing the Krylov
// basis. Extreme Ritz values stay reliable without full reorthogonalization;
// loss of orthogonality only produces duplicate copies of converged values.
template <class Scalar>
SpectralReport lanczos(const DeflatedOperator<Scalar>& op, const SolverOptions& options, RngStream& stream) {
  SpectralReport best;
  best.method = "lanczos";
  best.mode = options.mode;
  best.unit_mult = op.trivial_count;
  IteratedMap<Scalar> map{op, options.mode, {}};
  const bool eigen = options.mode == SpectralMode::eigen;
  const std::size_t check_every = 5;
  const std::size_t window = std::max<std::size_t>(options.window / check_every, 2);

  std::size_t total_iters = 0;
  for (std::size_t attempt = 0; attempt <= options.restarts; ++attempt) {
    Vec<Scalar> q;
    if (!random_start(op, stream, q)) {
      best.lambda = best.signed_lambda = 0.0;
      best.converged = true;
      best.iterations = total_iters;
      return best;
    }
    Vec<Scalar> q_prev = Vec<Scalar>::Zero(q.size());
    Vec<Scalar> w(q.size());
    std::vector<double> alphas, betas;
    double beta = 0.0;
    std::deque<double> history;
    double estimate = 0.0, signed_estimate = 0.0, residual = std::numeric_limits<double>::infinity();
    bool converged = false;

    for (std::size_t j = 1; j <= options.max_iters; ++j) {
      ++total_iters;
      map(q, w);
      const double alpha = std::real(q.dot(w));
      w -= alpha * q;
      if (beta != 0.0) w -= beta * q_prev;
      // One step of local reorthogonalization.
      const Scalar c1 = q.dot(w);
      w -= c1 * q;
      if (beta != 0.0) {
        const Scalar c2 = q_prev.dot(w);
        w -= c2 * q_prev;
      }
      const double beta_next = w.norm();
      alphas.push_back(alpha);

      const bool exhausted = beta_next <= 1e-14 * std::max(1.0, std::abs(alpha));
      if (exhausted || j % check_every == 0 || j == options.max_iters || j == op.dim) {
        const Eigen::Index m = static_cast<Eigen::Index>(alphas.size());
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alphas.data(), m);
        Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
        for (Eigen::Index i = 0; i + 1 < m; ++i) sub[i] = betas[static_cast<std::size_t>(i)];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        const auto& evals = tri.eigenvalues();
        Eigen::Index idx = 0;
        for (Eigen::Index i = 1; i < m; ++i) {
          if (std::abs(evals[i]) > std::abs(evals[idx])) idx = i;
        }
        const double ritz = evals[idx];
        history.push_back(std::abs(ritz));
        if (history.size() > window) history.pop_front();
        const bool settled = history.size() == window && window_relative_change(history) < options.tol;
        double ritz_residual = std::numeric_limits<double>::infinity();
        if (settled || exhausted || j == options.max_iters) {
          // Eigenvectors are only needed for the residual, so they are
          // computed once the estimate has stopped moving.
          tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
          ritz_residual = beta_next * std::abs(tri.eigenvectors()(m - 1, idx));
        }
        if (eigen) {
          estimate = std::abs(ritz);
          signed_estimate = ritz;
          residual = ritz_residual;
        } else {
          estimate = std::sqrt(std::max(ritz, 0.0));
          signed_estimate = estimate;
          residual = ritz_residual / std::max(2.0 * estimate, std::numeric_limits<double>::min());
        }
        if (exhausted || (settled && residual <= 10.0 * options.tol)) {
          converged = true;
          if (exhausted) residual = 0.0;
          break;
        }
      }
      if (j == op.dim) break;
      betas.push_back(beta_next);
      q_prev = q;
      q = w / beta_next;
      beta = beta_next;
    }
    if (attempt == 0 || estimate > best.lambda || converged) {
      best.lambda = estimate;
      best.signed_lambda = signed_estimate;
      best.residual = residual;
    }
    best.converged = converged;
    if (converged) break;
  }
  best.iterations = total_iters;
  return best;
}

template <class Scalar>
bool is_hermitian(const DenseMatrix<Scalar>& m, double tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

template <class Scalar>
SpectralReport dense_solve(const DeflatedOperator<Scalar>& op, const SolverOptions& options) {
  SpectralReport report;
  report.method = "dense";
  report.mode = options.mode;
  report.converged = true;

  DenseMatrix<Scalar> m = assemble_dense(op);
  // Compress to the complement of the trivial space: P M P.
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    op.project_out(std::span<Scalar>(m.col(c).data(), static_cast<std::size_t>(m.rows())));
  }
  DenseMatrix<Scalar> mt = m.adjoint();
  for (Eigen::Index c = 0; c < mt.cols(); ++c) {
    op.project_out(std::span<Scalar>(mt.col(c).data(), static_cast<std::size_t>(mt.rows())));
  }
  m = mt.adjoint();

  if (options.mode == SpectralMode::eigen) {
    DenseMatrix<Scalar> h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(
        h, options.keep_vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    Eigen::Index idx = 0;
    for (Eigen::Index i = 1; i < ev.size(); ++i) {
      if (std::abs(ev[i]) > std::abs(ev[idx])) idx = i;
    }
    report.lambda = ev.size() ? std::abs(ev[idx]) : 0.0;
    report.signed_lambda = ev.size() ? ev[idx] : 0.0;
    std::size_t near_one = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) near_one += std::abs(ev[i] - 1.0) <= options.unit_tol;
    report.unit_mult = op.trivial_count + near_one;
    if (options.keep_vector && ev.size()) store_vector<Scalar>(es.eigenvectors().col(idx), report);
  } else {
    Eigen::BDCSVD<DenseMatrix<Scalar>> svd(m, options.keep_vector ? Eigen::ComputeThinV : 0);
    const auto& sv = svd.singularValues();
    report.lambda = sv.size() ? sv[0] : 0.0;
    report.signed_lambda = report.lambda;
    report.unit_mult = op.trivial_count;
    if (options.count_unit) report.unit_mult += count_unit_eigenvalues<Scalar>(m, options.unit_tol);
    if (options.keep_vector && sv.size()) store_vector<Scalar>(svd.matrixV().col(0), report);
  }
  return report;
}

}  // namespace

template <class Scalar>
DenseMatrix<Scalar> assemble_dense(const DeflatedOperator<Scalar>& op) {
  const auto n = static_cast<Eigen::Index>(op.dim);
  DenseMatrix<Scalar> m(n, n);
  Vec<Scalar> e = Vec<Scalar>::Zero(n);
  Vec<Scalar> col(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = Scalar(1);
    op.apply(cspan(e), mspan(col));
    m.col(j) = col;
    e[j] = Scalar(0);
  }
  return m;
}

template <class Scalar>
std::vector<std::complex<double>> dense_eigenvalues(const DenseMatrix<Scalar>& m) {
  std::vector<std::complex<double>> out;
  if (m.rows() == 0) return out;
  if (is_hermitian<Scalar>(m, 1e-12)) {
    DenseMatrix<Scalar> h = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(h, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.emplace_back(es.eigenvalues()[i], 0.0);
  } else if constexpr (std::is_same_v<Scalar, double>) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
  }
  return out;
}

template <class Scalar>
std::size_t count_unit_eigenvalues(const DenseMatrix<Scalar>& m, double tol) {
  std::size_t count = 0;
  for (const auto& ev : dense_eigenvalues<Scalar>(m)) count += std::abs(ev - 1.0) <= tol;
  return count;
}

template <class Scalar>
SpectralReport solve_deflated(const DeflatedOperator<Scalar>& op, const SolverOptions& options,
                              RngStream& stream) {
  if (options.mode == SpectralMode::eigen && !op.hermitian) {
    throw NotHermitian("eigen mode requires a Hermitian operator; use singular mode");
  }
  const bool dense = options.oracle == Oracle::dense ||
                     (options.oracle == Oracle::automatic && op.dim <= options.dense_cap);
  if (dense) {
    if (op.dim > options.dense_cap) {
      throw CapExceeded("dense oracle requested for dimension " + std::to_string(op.dim) +
                        " above dense cap " + std::to_string(options.dense_cap));
    }
    return dense_solve(op, options);
  }
  return options.method == SolverMethod::power ? power_iteration(op, options, stream)
                                               : lanczos(op, options, stream);
}

template SpectralReport solve_deflated<double>(const DeflatedOperator<double>&, const SolverOptions&, RngStream&);
template SpectralReport solve_deflated<std::complex<double>>(const DeflatedOperator<std::complex<double>>&,
                                                             const SolverOptions&, RngStream&);
template DenseMatrix<double> assemble_dense<double>(const DeflatedOperator<double>&);
template DenseMatrix<std::complex<double>> assemble_dense<std::complex<double>>(
    const DeflatedOperator<std::complex<double>>&);
template std::vector<std::complex<double>> dense_eigenvalues<double>(const DenseMatrix<double>&);
template std::vector<std::complex<double>> dense_eigenvalues<std::complex<double>>(
    const DenseMatrix<std::complex<double>>&);
template std::size_t count_unit_eigenvalues<double>(const DenseMatrix<double>&, double);
template std::size_t count_unit_eigenvalues<std::complex<double>>(const DenseMatrix<std::complex<double>>&,
                                                                  double);

}  // namespace tpe
