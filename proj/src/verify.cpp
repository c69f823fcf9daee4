#include "tpe/verify.hpp"

#include <cmath>
#include <sstream>

#include "tpe/classical_tpe.hpp"
#include "tpe/errors.hpp"
#include "tpe/partition.hpp"

namespace tpe {

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

Json VerifyReport::to_json() const {
  Json j;
  j["suite"] = suite;
  j["passed"] = passed();
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["detail"] = c.detail;
    e["reference"] = c.reference;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"identities", "counterexamples", "theorem3",
                                              "lemma",      "mixing",          "moments"};
  return names;
}

namespace {

template <class... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream os;
  os.precision(12);
  (os << ... << parts);
  return os.str();
}

void identities(VerifyReport& rep, const VerifyParams& params) {
  const char* partition_ref = "trivial eigenspace of L_k is spanned by equality-pattern classes";
  rep.checks.push_back({"f_count small k", f_count(10, 1) == 1 && f_count(10, 2) == 2 && f_count(10, 3) == 5,
                        cat("f_1=", f_count(10, 1), " f_2=", f_count(10, 2), " f_3=", f_count(10, 3)),
                        partition_ref});
  bool all = true;
  std::string worst;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t k = 1; k <= 6; ++k) {
      const auto listed = enumerate_partitions(k, n).size();
      if (listed != f_count(n, k)) {
        all = false;
        worst = cat("N=", n, " k=", k, " enumerated ", listed, " vs ", f_count(n, k));
      }
    }
  }
  rep.checks.push_back({"f_count vs enumeration", all, all ? "N<=6, k<=6" : worst, partition_ref});

  all = true;
  worst.clear();
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t n = k; n <= 6; ++n) {
      const auto g = perm_operator_gram(n, k);
      std::size_t fact = 1;
      for (std::size_t i = 2; i <= k; ++i) fact *= i;
      if (g.rank != fact) {
        all = false;
        worst = cat("N=", n, " k=", k, " rank ", g.rank);
      }
    }
  }
  rep.checks.push_back({"permutation operator Gram rank", all, all ? "rank k! for N>=k, k<=4" : worst,
                        "permutation operators P_N(pi) are linearly independent when N >= k"});

  double err = 0.0;
  for (std::size_t n = 3; n <= 10; ++n) err = std::max(err, std::abs(phi2_z_overlap(n) + 1.0 / double(n - 1)));
  rep.checks.push_back({"phi2 Z overlap", err <= 1e-12, cat("max error ", err),
                        "<phi2| Z (x) Z* |phi2> = -1/(N-1)"});

  RngStream stream(params.seed);
  double gap = 0.0;
  for (std::size_t t = 0; t < 20; ++t) {
    RngStream sub = stream.split(t);
    const std::size_t n = 2 + t % 2;
    const std::size_t k = 1 + (t / 2) % 2;
    const auto u = haar_unitary(n, sub);
    const auto v = (t % 5 == 0) ? Eigen::MatrixXcd(u * std::polar(1.0, 0.7)) : haar_unitary(n, sub);
    gap = std::max(gap, sk_overlap_check(u, v, k).gap);
  }
  rep.checks.push_back({"entangled-state overlap identity", gap <= 1e-10, cat("max |lhs-rhs| ", gap),
                        "tr rho(U) rho(V) = (|tr U^dag V| / N)^{2k}"});

  const bool iters = required_iterations(0.5, 16, 2.0) == 1 && required_iterations(0.5, 16, 0.1) == 6;
  rep.checks.push_back({"required_iterations", iters, "lambda=1/2, N=16, eps in {2, 0.1}",
                        "smallest m with lambda^m <= eps / sqrt(N)"});
  const auto w1 = word_count(4, 3), w2 = word_count(2, 10);
  rep.checks.push_back({"word_count", w1.value == 64u && w2.value == 1024u, cat(w1.decimal, ", ", w2.decimal),
                        "K = D^m"});
}

void counterexamples(VerifyReport& rep, const VerifyParams& params) {
  RngStream stream(params.seed);
  const auto base = hermitian_family(6, 4, stream);
  const ClassicalTpeOperator doubled(doubled_counterexample(base), 2);
  const auto mult = unit_multiplicity(doubled, 1e-6);
  rep.checks.push_back({"doubled construction, k=2", mult.count >= 3 && mult.count > f_count(12, 2),
                        cat("unit multiplicity ", mult.count, " vs f_2 = ", f_count(12, 2)),
                        "a gapped expander doubled by a copy swap is not a 2-copy TPE"});
  for (std::size_t n = 5; n <= 12; ++n) {
    const auto group = cyclic_group(n);
    const std::vector<std::uint32_t> gens{1, static_cast<std::uint32_t>(n - 1)};
    const ClassicalTpeOperator op(cayley_family(group, gens), 2);
    const auto m = unit_multiplicity(op, 1e-6);
    rep.checks.push_back({cat("Cayley Z_", n, ", k=2"), m.count >= n,
                          cat("unit multiplicity ", m.count, " vs N = ", n),
                          "Cayley families of abelian groups fix every diagonal-translate class at k=2"});
  }
}

void theorem3(VerifyReport& rep, const VerifyParams& params) {
  const RngStream root(params.seed);
  for (std::size_t f = 0; f < params.families; ++f) {
    RngStream sub = root.split(f);
    const std::size_t n = 16 + 8 * (f % 3);
    const auto family = hermitian_family(n, 4, sub);
    SolverOptions opts;
    const double eps = measure_2tpe_epsilon(family, opts, sub);
    if (eps <= 1e-9) {
      // Intransitive draws (probability about 1/N) have no 2-copy gap.
      rep.checks.push_back({cat("family ", f, " (N=", n, ")"), true,
                            "skipped: measured 2-copy gap is zero, so the bound has no hypothesis to test",
                            "z-phase channel gap >= eps/48"});
      continue;
    }
    opts.mode = SpectralMode::singular;
    const auto plain = channel_gap(z_phase_expander(family, eps, false), opts, sub);
    opts.mode = SpectralMode::eigen;
    const auto herm = channel_gap(z_phase_expander(family, eps, true), opts, sub);
    const double need = eps / 48.0;
    rep.checks.push_back({cat("family ", f, " (N=", n, ") D+1"), 1.0 - plain.lambda >= need,
                          cat("gap ", 1.0 - plain.lambda, " vs eps/48 ", need), "z-phase channel gap >= eps/48"});
    rep.checks.push_back({cat("family ", f, " (N=", n, ") D+2 Hermitian"), 1.0 - herm.lambda >= need,
                          cat("gap ", 1.0 - herm.lambda, " vs eps/48 ", need),
                          "Hermitian z-phase channel gap >= eps/48"});
  }
}

void lemma(VerifyReport& rep, const VerifyParams& params) {
  const RngStream root(params.seed);
  std::size_t violations = 0, bad_hypotheses = 0;
  double worst = 1.0;
  for (std::size_t i = 0; i < params.instances; ++i) {
    const auto inst = sample_lemma_case(i, root);
    if (inst.residuals().max() > 1e-10) ++bad_hypotheses;
    const auto c = check_lemma(inst);
    if (!c.pass) ++violations;
    worst = std::min(worst, c.margin);
  }
  rep.checks.push_back({"random instances", violations == 0 && bad_hypotheses == 0,
                        cat(params.instances, " instances, ", violations, " violations, ", bad_hypotheses,
                            " hypothesis failures, min margin ", worst),
                        "||pX + (1-p)Y|| <= 1 - (eps_Y/12) min(p eps_X, 1-p)"});
  const RngStream sub = root.split(params.instances);
  std::size_t draw = 0;
  for (std::size_t n : {6, 8, 10}) {
    // Families without a 2-copy gap (eps_x = 0) do not meet the hypotheses;
    // draw until one does.
    std::size_t skipped = 0;
    for (;;) {
      RngStream s = sub.split(draw++);
      const auto inst = theorem3_lemma_instance(hermitian_family(n, 4, s));
      if (inst.eps_x <= 1e-9 && skipped < 50) {
        ++skipped;
        continue;
      }
      const auto c = check_lemma(inst);
      const bool ok = c.pass && inst.residuals().max() <= 1e-10 && inst.eps_y >= 0.5 && inst.eps_x > 1e-9;
      rep.checks.push_back({cat("z-phase instance N=", n), ok,
                            cat("eps_x ", inst.eps_x, " eps_y ", inst.eps_y, " margin ", c.margin, ", ", skipped,
                                " ungapped draws skipped"),
                            "lemma hypotheses and bound for the z-phase construction"});
      break;
    }
  }
}

void mixing(VerifyReport& rep, const VerifyParams& params) {
  const RngStream root(params.seed);
  for (std::size_t f = 0; f < params.families; ++f) {
    RngStream sub = root.split(f);
    const std::size_t n = 8 + 4 * f;
    const auto family = hermitian_family(n, 4, sub);
    const auto ch = sign_expander(family, sub.split(1000));
    const auto gap = channel_gap(ch, SolverOptions{}, sub);
    std::size_t violations = 0;
    for (std::size_t t = 0; t < 5; ++t) {
      RngStream ts = sub.split(t);
      const auto trace = iterate_channel(ch, random_pure_state(n, ts), 30, gap.lambda);
      if (trace.any_violation()) ++violations;
    }
    rep.checks.push_back({cat("sign channel N=", n), violations == 0,
                          cat("lambda ", gap.lambda, ", ", violations, " violating inputs"),
                          "||E^m(rho) - I/N||_2 <= lambda^m and ||.||_1 <= sqrt(N) lambda^m"});
  }
}

void moments(VerifyReport& rep, const VerifyParams& params) {
  const RngStream root(params.seed);
  std::size_t idx = 0;
  for (std::size_t k = 1; k <= 2; ++k) {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= double(i);
    for (std::size_t n = std::max<std::size_t>(2, k); n <= 4; ++n) {
      const auto est = trace_moment_mc(n, k, params.samples, root.split(idx++));
      const double z = std::abs(est.mean - fact) / est.std_error;
      rep.checks.push_back({cat("k=", k, " N=", n), z <= 3.0,
                            cat("mean ", est.mean, " +- ", est.std_error, " vs ", fact),
                            "E|tr X|^{2k} = k! for Haar X when N >= k"});
    }
  }
}

}  // namespace

VerifyReport run_verify_suite(std::string_view suite, const VerifyParams& params) {
  VerifyReport rep;
  rep.suite = std::string(suite);
  if (suite == "identities") {
    identities(rep, params);
  } else if (suite == "counterexamples") {
    counterexamples(rep, params);
  } else if (suite == "theorem3") {
    theorem3(rep, params);
  } else if (suite == "lemma") {
    lemma(rep, params);
  } else if (suite == "mixing") {
    mixing(rep, params);
  } else if (suite == "moments") {
    moments(rep, params);
  } else {
    throw InvalidArgument("unknown verify suite '" + std::string(suite) + "'");
  }
  return rep;
}

}  // namespace tpe
