// Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
// limit. Usage: acceptance [criterion numbers...] (default: all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tpe/channel.hpp"
#include "tpe/classical_tpe.hpp"
#include "tpe/lemma.hpp"
#include "tpe/mixing.hpp"
#include "tpe/partition.hpp"
#include "tpe/quantum_tpe.hpp"

using namespace tpe;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<void(Outcome&)> body;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t factorial(std::size_t k) { return k <= 1 ? 1 : k * factorial(k - 1); }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Eigenvalues of a dense real matrix within tol of 1.
std::size_t dense_unit_count(const Eigen::MatrixXd& m, double tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) c += std::abs(es.eigenvalues()[i] - 1.0) <= tol;
  return c;
}

// ---------------------------------------------------------------------------

void crit1(Outcome& o) {
  for (std::size_t n = 3; n <= 12; ++n) {
    o.require(f_count(n, 1) == 1 && f_count(n, 2) == 2 && f_count(n, 3) == 5, "f_1, f_2, f_3 at N=" + std::to_string(n));
  }
  std::size_t cells = 0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 1; k <= 6; ++k) {
      const auto brute = oracle::brute_partitions(k, n).size();
      o.require(f_count(n, k) == brute, "f_count vs brute force at N=" + std::to_string(n) + " k=" + std::to_string(k));
      o.require(enumerate_partitions(k, n).size() == brute, "enumeration size");
      ++cells;
    }
  }
  o.detail << "f_1=" << f_count(10, 1) << " f_2=" << f_count(10, 2) << " f_3=" << f_count(10, 3) << "; " << cells
           << " (N,k) cells match brute-force enumeration";
}

void crit2(Outcome& o) {
  const RngStream root(20002);
  std::size_t accepted = 0, drawn = 0, skipped = 0;
  double worst_residual = 0.0;
  while (accepted < 20) {
    RngStream s = root.split(drawn);
    const std::size_t k = 1 + drawn % 3;
    const std::size_t n = k == 3 ? 5 + drawn % 6 : 6 + (drawn * 7) % 15;
    ++drawn;
    const auto f = hermitian_family(n, 4, s);
    const ClassicalTpeOperator op(f, k);
    for (const auto& u : trivial_basis(n, k)) {
      worst_residual = std::max(worst_residual, (to_eigen(op.apply(u)) - to_eigen(u)).norm());
    }
    const auto mult = unit_multiplicity(op, 1e-6);
    const auto orbits = oracle::tuple_orbits(f, k);
    o.require(mult.dense, "dense route");
    o.require(mult.count == orbits, "multiplicity equals the tuple-orbit count");
    if (orbits != f_count(n, k)) {
      // The generated group is not k-transitive; f_count does not apply.
      ++skipped;
      continue;
    }
    o.require(mult.count == f_count(n, k),
              "multiplicity " + std::to_string(mult.count) + " vs f_count at N=" + std::to_string(n));
    ++accepted;
  }
  o.require(worst_residual <= 1e-12, "stationarity residual");
  o.detail << accepted << " families (N<=20, k<=3), multiplicity == f_count; max stationarity residual "
           << worst_residual << "; " << skipped << " draws not k-transitive (multiplicity matched orbit count)";
}

void crit3(Outcome& o) {
  std::size_t grams = 0;
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::size_t n = k; n <= 8; ++n) {
      o.require(perm_operator_gram(n, k).rank == factorial(k), "Gram rank at N=" + std::to_string(n));
      ++grams;
    }
  }
  const RngStream root(30003);
  const std::vector<std::pair<std::size_t, std::size_t>> shapes{{2, 1}, {3, 1}, {5, 1}, {2, 2}, {3, 2},
                                                                {4, 2}, {2, 3}, {3, 3}};
  double worst = 0.0;
  std::size_t vectors = 0;
  for (std::size_t fam = 0; fam < 10; ++fam) {
    for (const auto& [n, k] : shapes) {
      RngStream s = root.split(fam * 100 + n * 10 + k);
      const QuantumTpeOperator op(hermitian_unitary_family(n, 4, s), k);
      const auto basis = twirl_basis(n, k);
      o.require(basis.size() == perm_operator_gram(n, k).rank, "twirl basis size");
      for (const auto& b : basis) {
        worst = std::max(worst, (to_eigen(op.apply_hat(b)) - to_eigen(b)).norm());
        ++vectors;
      }
    }
  }
  o.require(worst <= 1e-9, "twirl fixed-point residual");
  o.detail << grams << " Gram ranks equal k!; " << vectors << " twirl vectors over 10 families, max residual "
           << worst;
}

void crit4(Outcome& o) {
  const RngStream root(40004);
  double worst_z = 0.0;
  std::size_t cells = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t n = std::max<std::size_t>(2, k); n <= 6; ++n) {
      const auto est = trace_moment_mc(n, k, 100000, root.split(10 * k + n));
      const double z = std::abs(est.mean - double(factorial(k))) / est.std_error;
      worst_z = std::max(worst_z, z);
      o.require(z <= 3.0, "moment at N=" + std::to_string(n) + " k=" + std::to_string(k));
      ++cells;
    }
  }
  o.detail << cells << " (N,k) cells with 1e5 samples; max |mean - k!| / stderr = " << worst_z;
}

void crit5(Outcome& o) {
  const RngStream root(50005);
  std::size_t doubled_cases = 0;
  std::size_t min_doubled = 1000;
  for (std::size_t i = 0; doubled_cases < 4; ++i) {
    RngStream s = root.split(i);
    const std::size_t n = 4 + 2 * (i % 3);
    const auto base = hermitian_family(n, 4, s);
    if (measure_2tpe_epsilon(base) <= 1e-9) continue;  // base must be gapped at k = 2
    const auto doubled = doubled_counterexample(base);
    const ClassicalTpeOperator op(doubled, 2);
    const auto m = unit_multiplicity(op, 1e-6);
    const auto dense = dense_unit_count(oracle::dense_lk(doubled, 2), 1e-6);
    o.require(m.dense && m.count >= 3 && m.count > f_count(2 * n, 2), "doubled multiplicity");
    o.require(dense == m.count, "doubled multiplicity vs explicit matrix");
    min_doubled = std::min(min_doubled, m.count);
    ++doubled_cases;
  }
  std::size_t cayley_cases = 0;
  RngStream gs(50006);
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto group = cyclic_group(n);
    std::vector<std::vector<std::uint32_t>> gensets{{1, static_cast<std::uint32_t>(n - 1)}};
    std::vector<std::uint32_t> rnd;
    for (int j = 0; j < 3; ++j) rnd.push_back(static_cast<std::uint32_t>(gs.uniform_below(n)));
    gensets.push_back(rnd);
    for (const auto& gens : gensets) {
      const auto fam = cayley_family(group, gens);
      const ClassicalTpeOperator op(fam, 2);
      const auto m = unit_multiplicity(op, 1e-6);
      o.require(m.dense && m.count >= n, "Cayley Z_" + std::to_string(n) + " multiplicity " + std::to_string(m.count));
      o.require(dense_unit_count(oracle::dense_lk(fam, 2), 1e-6) == m.count, "Cayley vs explicit matrix");
      ++cayley_cases;
    }
  }
  o.detail << doubled_cases << " doubled families, min multiplicity " << min_doubled << " (f_2 = 2); "
           << cayley_cases << " Z_N Cayley families (N<=12) with multiplicity >= N";
}

void crit6(Outcome& o) {
  const RngStream root(60006);
  const std::size_t sizes[] = {16, 24, 32};
  std::size_t gapped = 0, drawn = 0, skipped = 0;
  double min_ratio_plain = 1e300, min_ratio_herm = 1e300;
  while (gapped < 20) {
    RngStream s = root.split(drawn);
    const std::size_t n = sizes[drawn % 3];
    ++drawn;
    const auto f = hermitian_family(n, 4, s);
    const double eps = measure_2tpe_epsilon(f);
    if (eps <= 1e-9) {
      ++skipped;  // no 2-copy gap: the hypothesis is not met
      continue;
    }
    SolverOptions opt;
    opt.count_unit = false;
    opt.mode = SpectralMode::singular;
    const double plain = 1.0 - channel_gap(z_phase_expander(f, eps, false), opt, s).lambda;
    opt.mode = SpectralMode::eigen;
    const double herm = 1.0 - channel_gap(z_phase_expander(f, eps, true), opt, s).lambda;
    o.require(plain >= eps / 48.0, "D+1 gap below eps/48 at N=" + std::to_string(n));
    o.require(herm >= eps / 48.0, "D+2 gap below eps/48 at N=" + std::to_string(n));
    min_ratio_plain = std::min(min_ratio_plain, plain / (eps / 48.0));
    min_ratio_herm = std::min(min_ratio_herm, herm / (eps / 48.0));
    ++gapped;
  }
  o.detail << gapped << " gapped families (N in {16,24,32}); min gap/(eps/48): D+1 " << min_ratio_plain
           << ", D+2 Hermitian " << min_ratio_herm << "; " << skipped << " draws without a 2-copy gap skipped";
}

void crit7(Outcome& o) {
  const RngStream root(70007);
  double worst = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    RngStream s = root.split(i);
    const std::size_t n = 8 + (56 * i) / 9;
    const auto f = hermitian_family(n, 4, s);
    const auto ch = sign_expander(f, s.split(1));
    Eigen::MatrixXd t(n, n);
    for (std::size_t l = 0; l < n; ++l) {
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
      e(l, l) = 1.0;
      const Eigen::MatrixXcd out = channel_apply(ch, e);
      double off = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        t(a, l) = out(a, a).real();
        for (std::size_t b = 0; b < n; ++b)
          if (a != b) off = std::max(off, std::abs(out(a, b)));
      }
      o.require(off == 0.0, "diagonal input left the diagonal sector");
    }
    o.require((t - t.transpose()).cwiseAbs().maxCoeff() <= 1e-14, "diagonal sector symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a(t, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b(oracle::dense_lk(f, 1), Eigen::EigenvaluesOnly);
    worst = std::max(worst, (a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff());
  }
  o.require(worst <= 1e-8, "spectrum mismatch");
  o.detail << "10 sign channels, N in 8..64; max |eig(sector) - eig(L_1)| = " << worst;
}

void crit8(Outcome& o) {
  const RngStream root(80008);
  std::size_t instances = 0, traces = 0, violations = 0, iter_checks = 0, iter_fail = 0;
  auto run_channel = [&](const KrausChannel& ch, RngStream& s, const std::string& label) {
    SolverOptions opt;
    opt.count_unit = false;
    opt.mode = ch.hermitian ? SpectralMode::eigen : SpectralMode::singular;
    const double lambda = channel_gap(ch, opt, s).lambda;
    o.require(lambda < 1.0, label + " has no gap");
    const std::size_t n = ch.size();
    for (std::size_t t = 0; t < 20; ++t) {
      RngStream ts = s.split(t);
      const auto tr = iterate_channel(ch, random_pure_state(n, ts), 50, lambda);
      ++traces;
      if (tr.any_violation()) ++violations;
    }
    for (double eps : {0.1, 0.01}) {
      const auto m = required_iterations(lambda, n, eps);
      for (std::size_t t = 0; t < 20; ++t) {
        RngStream ts = s.split(100 + t);
        const auto tr = iterate_channel(ch, random_pure_state(n, ts), m);
        ++iter_checks;
        if (tr.steps.back().l1 > eps) ++iter_fail;
      }
    }
    ++instances;
  };
  for (std::size_t n : {8, 16, 32, 64}) {
    RngStream s = root.split(n);
    const auto f = hermitian_family(n, 4, s);
    run_channel(sign_expander(f, s.split(7)), s, "sign N=" + std::to_string(n));
    if (n <= 32) {
      const double eps = measure_2tpe_epsilon(f);
      if (eps > 1e-9) run_channel(z_phase_expander(f, eps, true), s, "z-phase Hermitian N=" + std::to_string(n));
    }
  }
  for (std::size_t n : {2, 4, 8, 16}) {
    RngStream s = root.split(1000 + n);
    const auto uf = hermitian_unitary_family(n, 4, s);
    const auto ch = unitary_mixture(uf);
    run_channel(ch, s, "mixture N=" + std::to_string(n));
    const double lambda = channel_gap(ch, SolverOptions{}, s).lambda;
    const auto m = required_iterations(lambda, n, 0.05);
    const auto exp = state_random_experiment(uf, m, 100, s.split(9), lambda);
    ++iter_checks;
    if (exp.worst_l1 > 0.05) ++iter_fail;
  }
  for (std::size_t n : {8, 16}) {
    for (std::size_t k : {1, 2}) {
      RngStream s = root.split(2000 + 10 * n + k);
      const ClassicalTpeOperator op(hermitian_family(n, 4, s), k);
      const double lambda = lambda_estimate(op, SolverOptions{}, s).lambda;
      for (std::size_t t = 0; t < 20; ++t) {
        std::vector<double> p(op.dim(), 0.0);
        p[s.uniform_below(op.dim())] = 1.0;
        ++traces;
        if (iterate_classical(op, p, 50, lambda).any_violation()) ++violations;
      }
      ++instances;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " bound violations");
  o.require(iter_fail == 0, std::to_string(iter_fail) + " required_iterations misses");
  o.detail << instances << " instances, " << traces << " traces (m<=50), " << violations << " violations; "
           << iter_checks << " required_iterations runs, " << iter_fail << " above eps";
}

void crit9(Outcome& o) {
  const RngStream root(90009);
  std::size_t violations = 0, bad = 0;
  double min_margin = 1e300;
  for (std::size_t i = 0; i < 10000; ++i) {
    const auto inst = sample_lemma_case(i, root);
    if (inst.residuals().max() > kLemmaTolerance) ++bad;
    const auto c = check_lemma(inst);
    if (!c.pass) ++violations;
    min_margin = std::min(min_margin, c.margin);
  }
  RngStream s = root.split(20000);
  for (std::size_t n = 3; n <= 10; ++n) {
    const auto inst = theorem3_lemma_instance(hermitian_family(n, 4, s));
    if (inst.residuals().max() > kLemmaTolerance) ++bad;
    if (!check_lemma(inst).pass) ++violations;
    o.require(inst.eps_y >= 0.5, "eps_y >= 1/2");
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(bad == 0, std::to_string(bad) + " instances outside the hypotheses");
  o.detail << "10000 random + 8 z-phase instances, " << violations << " violations, min margin " << min_margin;
}

void crit10(Outcome& o) {
  const RngStream root(100010);
  double worst = 0.0;
  std::size_t phase_cases = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    RngStream s = root.split(i);
    const std::size_t n = 1 + i % 3;
    const std::size_t k = 1 + (i / 3) % 2;
    const auto u = haar_unitary(n, s);
    Eigen::MatrixXcd v;
    if (i % 5 == 0) {
      v = u * std::polar(1.0, 2.0 * std::numbers::pi * s.uniform01());
      ++phase_cases;
    } else {
      v = haar_unitary(n, s);
    }
    const auto c = sk_overlap_check(u, v, k);
    worst = std::max(worst, c.gap);
    if (i % 5 == 0) o.require(std::abs(c.lhs - 1.0) <= 1e-10 && std::abs(c.rhs - 1.0) <= 1e-10, "phase invariance");
  }
  o.require(worst <= 1e-10, "overlap identity");
  o.detail << "50 pairs (N<=3, k<=2, " << phase_cases << " phase-related), max |lhs - rhs| = " << worst;
}

void crit11(Outcome& o) {
  const RngStream root(110011);
  const double lambda_h = ramanujan_reference(4);
  std::vector<double> k1;
  for (std::size_t i = 0; i < 10; ++i) {
    RngStream s = root.split(i);
    const ClassicalTpeOperator op(hermitian_family(2000, 4, s), 1);
    k1.push_back(lambda_estimate(op, SolverOptions{}, s).lambda);
  }
  const std::size_t inside = std::count_if(k1.begin(), k1.end(), [](double x) { return x >= 0.80 && x <= 0.92; });
  const double med1 = median(k1);
  o.require(med1 >= 0.80 && med1 <= 0.92, "k=1 median outside [0.80, 0.92]");
  o.require(inside >= 9, "fewer than 9/10 k=1 seeds inside the interval");

  std::vector<double> k2;
  for (std::size_t i = 0; i < 5; ++i) {
    RngStream s = root.split(100 + i);
    const ClassicalTpeOperator op(hermitian_family(2000, 4, s), 2);
    SolverOptions opt;
    opt.method = SolverMethod::lanczos;
    opt.oracle = Oracle::iterative;
    opt.tol = 1e-6;
    const auto r = lambda_estimate(op, opt, s);
    o.require(r.converged, "k=2 Lanczos did not converge");
    k2.push_back(r.lambda);
  }
  const double med2 = median(k2);
  const double ref2 = std::pow(lambda_h, 1.0 / 3.0) + 0.10;
  o.require(med2 <= ref2, "k=2 median above lambda_H^{1/3} + 0.10");
  o.detail << "k=1: median " << med1 << " (" << inside << "/10 in [0.80, 0.92], lambda_H " << lambda_h
           << "); k=2: median " << med2 << " over 5 seeds vs " << ref2;
}

void crit12(Outcome& o) {
  const RngStream root(120012);
  double worst = 0.0;
  std::size_t max_dim = 0;
  std::size_t counts[3] = {0, 0, 0};
  for (std::size_t i = 0; i < 50; ++i) {
    RngStream s = root.split(i);
    SolverOptions it;
    it.oracle = Oracle::iterative;
    it.method = i % 2 ? SolverMethod::lanczos : SolverMethod::power;
    SolverOptions de;
    de.oracle = Oracle::dense;
    de.count_unit = false;
    double a = 0.0, b = 0.0;
    std::size_t dim = 0;
    const std::size_t kind = i % 5;
    if (kind == 0 || kind == 1) {
      static const std::pair<std::size_t, std::size_t> shapes[] = {{60, 1}, {30, 2}, {11, 3}, {6, 4}, {4, 5}};
      const auto [n, k] = shapes[(i / 5) % 5];
      PermutationFamily f;
      if (kind == 0) {
        f = hermitian_family(n, 4, s);
      } else {
        for (int j = 0; j < 3; ++j) f.members.push_back(random_permutation(n, s));
        it.mode = de.mode = SpectralMode::singular;
      }
      const ClassicalTpeOperator op(f, k);
      dim = op.dim();
      a = lambda_estimate(op, it, s).lambda;
      b = lambda_estimate(op, de, s).lambda;
      ++counts[0];
    } else if (kind == 2) {
      static const std::pair<std::size_t, std::size_t> shapes[] = {{2, 1}, {5, 1}, {3, 2}, {4, 2}, {2, 3}};
      const auto [n, k] = shapes[(i / 5) % 5];
      UnitaryFamily f;
      if ((i / 5) % 2 == 0) {
        f = hermitian_unitary_family(n, 4, s);
      } else {
        f = random_unitary_family(n, 3, s);
        it.mode = de.mode = SpectralMode::singular;
      }
      const QuantumTpeOperator op(f, k);
      dim = op.dim();
      a = lambda_estimate_quantum(op, it, s).lambda;
      b = lambda_estimate_quantum(op, de, s).lambda;
      ++counts[1];
    } else {
      const std::size_t n = 6 + (i * 7) % 25;
      const auto f = hermitian_family(n, 4, s);
      KrausChannel ch;
      switch ((i / 5) % 4) {
        case 0: ch = sign_expander(f, s.split(3)); break;
        case 1: ch = z_phase_expander(f, 0.3, false); break;
        case 2: ch = z_phase_expander(f, 0.3, true); break;
        default: ch = unitary_mixture(hermitian_unitary_family(n, 4, s)); break;
      }
      it.mode = de.mode = ch.hermitian ? SpectralMode::eigen : SpectralMode::singular;
      dim = n * n;
      a = channel_gap(ch, it, s).lambda;
      b = channel_gap(ch, de, s).lambda;
      ++counts[2];
    }
    max_dim = std::max(max_dim, dim);
    worst = std::max(worst, std::abs(a - b));
    o.require(std::abs(a - b) <= 1e-6, "case " + std::to_string(i) + " differs by " + std::to_string(std::abs(a - b)));
  }
  o.detail << counts[0] << " classical, " << counts[1] << " quantum, " << counts[2]
           << " channel cases (dim <= " << max_dim << "); max |iterative - dense| = " << worst;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "trivial-eigenspace counts", 1.0, crit1},
      {2, "stationarity and unit multiplicity", 60.0, crit2},
      {3, "quantum fixed space", 60.0, crit3},
      {4, "trace moments", 300.0, crit4},
      {5, "counterexamples", 60.0, crit5},
      {6, "z-phase gap bound", 600.0, crit6},
      {7, "sign construction diagonal sector", 120.0, crit7},
      {8, "mixing bounds", 300.0, crit8},
      {9, "mixed-norm lemma", 120.0, crit9},
      {10, "entangled-state overlap identity", 10.0, crit10},
      {11, "gap statistics", 600.0, crit11},
      {12, "oracle equivalence", 300.0, crit12},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0, run = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    ++run;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_seconds;
    const bool ok = o.pass && in_time;
    if (!ok) ++failed;
    std::printf("[%s] %2d %-36s %8.2fs (limit %gs)%s | %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                c.limit_seconds, in_time ? "" : " over time", o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", run - failed, run);
  return failed == 0 ? 0 : 1;
}
