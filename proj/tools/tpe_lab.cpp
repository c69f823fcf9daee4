// tpe-lab: command-line front end for the tensor-product-expander toolkit.
//
// Exit codes: 0 success, 1 a verification or lemma check failed, 2 a size
// cap was exceeded, 3 any other error (I/O, validation, bad input). Usage
// errors use CLI11's own codes.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "tpe/channel.hpp"
#include "tpe/classical_tpe.hpp"
#include "tpe/errors.hpp"
#include "tpe/io.hpp"
#include "tpe/lemma.hpp"
#include "tpe/mixing.hpp"
#include "tpe/partition.hpp"
#include "tpe/quantum_tpe.hpp"
#include "tpe/verify.hpp"

namespace {

using namespace tpe;

constexpr int kExitCheckFailed = 1;
constexpr int kExitCap = 2;
constexpr int kExitError = 3;

struct Common {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t max_iters = 100000;
  std::size_t restarts = 3;
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t dim_cap = kDefaultDimCap;
  std::string out;
  std::string format = "csv";
  std::string method = "power";
  std::string oracle = "auto";
};

void add_solver_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--tol", c.tol, "Solver tolerance")->capture_default_str();
  cmd->add_option("--max-iters", c.max_iters, "Iteration budget per restart")->capture_default_str();
  cmd->add_option("--restarts", c.restarts, "Random restarts on non-convergence")->capture_default_str();
  cmd->add_option("--dense-cap", c.dense_cap, "Largest dimension for the dense route")->capture_default_str();
  cmd->add_option("--dim-cap", c.dim_cap, "Largest operator dimension accepted")->capture_default_str();
  cmd->add_option("--method", c.method, "Iterative solver")
      ->check(CLI::IsMember({"power", "lanczos"}))
      ->capture_default_str();
  cmd->add_option("--oracle", c.oracle, "auto: dense when dim <= dense cap")
      ->check(CLI::IsMember({"auto", "dense", "iterative"}))
      ->capture_default_str();
}

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  o.tol = c.tol;
  o.max_iters = c.max_iters;
  o.restarts = c.restarts;
  o.dense_cap = c.dense_cap;
  o.method = solver_method_from_string(c.method);
  o.oracle = oracle_from_string(c.oracle);
  return o;
}

void emit(const Common& c, const std::string& content) {
  if (c.out.empty()) {
    std::cout << content << std::flush;
  } else {
    write_text_file(c.out, content);
  }
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  std::size_t d = 4;
  std::string base;
  std::string family;
  std::vector<std::uint32_t> generators;
  bool non_hermitian = false;
  std::optional<double> epsilon;
};

int cmd_gen(const GenArgs& a, const Common& c, bool seed_given) {
  const bool randomized = a.kind == "classical" || a.kind == "quantum" || a.kind == "matching" || a.kind == "sign";
  if (randomized && !seed_given) throw InvalidArgument("gen " + a.kind + " requires --seed");
  RngStream stream(c.seed);
  Json j;
  std::string digest;
  auto family_digest = [](std::size_t n, std::size_t d, bool herm) {
    return "N=" + std::to_string(n) + " D=" + std::to_string(d) + " hermitian=" + (herm ? "true" : "false");
  };
  if (a.kind == "classical" || a.kind == "matching" || a.kind == "doubled" || a.kind == "cayley") {
    PermutationFamily fam;
    if (a.kind == "classical") {
      fam = hermitian_family(a.n, a.d, stream);
    } else if (a.kind == "matching") {
      fam = matching_family(a.n, a.d, stream);
    } else if (a.kind == "doubled") {
      if (a.base.empty()) throw InvalidArgument("gen doubled requires --base");
      fam = doubled_counterexample(permutation_family_from_json(read_json_file(a.base)));
    } else {
      if (a.generators.empty()) throw InvalidArgument("gen cayley requires --generators");
      fam = cayley_family(cyclic_group(a.n), a.generators);
    }
    j = to_json(fam);
    digest = family_digest(fam.size(), fam.degree(), fam.hermitian);
  } else if (a.kind == "quantum") {
    const UnitaryFamily fam = a.non_hermitian ? random_unitary_family(a.n, a.d, stream)
                                              : hermitian_unitary_family(a.n, a.d, stream);
    double residual = 0.0;
    for (const auto& u : fam.members) residual = std::max(residual, unitarity_residual(u));
    j = to_json(fam);
    digest = family_digest(fam.size(), fam.degree(), fam.hermitian) + " unitarity_residual=" + format_double(residual);
  } else if (a.kind == "sign" || a.kind == "z-phase" || a.kind == "z-phase-hermitian") {
    if (a.family.empty()) throw InvalidArgument("gen " + a.kind + " requires --family");
    const auto fam = permutation_family_from_json(read_json_file(a.family));
    KrausChannel ch;
    if (a.kind == "sign") {
      ch = sign_expander(fam, stream);
    } else {
      double eps;
      if (a.epsilon) {
        eps = *a.epsilon;
      } else {
        RngStream solver_stream(fam.seed);
        eps = measure_2tpe_epsilon(fam, solver_options(c), solver_stream);
      }
      ch = z_phase_expander(fam, eps, a.kind == "z-phase-hermitian");
      digest = "epsilon=" + format_double(eps) + " ";
    }
    j = to_json(ch);
    digest += "N=" + std::to_string(ch.size()) + " kraus=" + std::to_string(ch.kraus.size()) +
              " hermitian=" + (ch.hermitian ? "true" : "false") +
              " tp_residual=" + format_double(trace_preservation_residual(ch));
  } else {
    throw InvalidArgument("unknown gen kind '" + a.kind + "'");
  }
  const std::string text = dump(j);
  emit(c, text);
  (c.out.empty() ? std::cerr : std::cout) << digest << " hash=" << fnv1a_hex(text) << "\n";
  return 0;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
  std::string family;
  std::size_t k = 1;
  std::string mode;
  std::string dump_vector;
};

SpectralReport spectrum_of(const Json& j, std::size_t k, std::optional<SpectralMode> mode, const Common& c,
                           bool keep_vector) {
  SolverOptions o = solver_options(c);
  o.keep_vector = keep_vector;
  RngStream stream(c.seed);
  const std::string type = j.value("type", "");
  if (type == "classical") {
    const auto fam = permutation_family_from_json(j);
    o.mode = mode.value_or(fam.hermitian ? SpectralMode::eigen : SpectralMode::singular);
    return lambda_estimate(ClassicalTpeOperator(fam, k, c.dim_cap), o, stream);
  }
  if (type == "quantum") {
    const auto fam = unitary_family_from_json(j);
    o.mode = mode.value_or(fam.hermitian ? SpectralMode::eigen : SpectralMode::singular);
    return lambda_estimate_quantum(QuantumTpeOperator(fam, k, c.dim_cap), o, stream);
  }
  if (type == "channel") {
    const auto ch = channel_from_json(j);
    if (k != 1) throw InvalidArgument("channels act on one copy; use --k 1");
    checked_power(ch.size(), 2, c.dim_cap);
    o.mode = mode.value_or(ch.hermitian ? SpectralMode::eigen : SpectralMode::singular);
    return channel_gap(ch, o, stream);
  }
  throw InvalidArgument("family file has unknown type '" + type + "'");
}

int cmd_spectrum(const SpectrumArgs& a, const Common& c) {
  const Json j = read_json_file(a.family);
  std::optional<SpectralMode> mode;
  if (!a.mode.empty()) mode = spectral_mode_from_string(a.mode);
  const SpectralReport r = spectrum_of(j, a.k, mode, c, !a.dump_vector.empty());
  if (!a.dump_vector.empty()) {
    Json v;
    v["complex"] = r.vector_is_complex;
    v["vector"] = r.vector;
    write_text_file(a.dump_vector, dump(v));
  }
  if (c.format == "json") {
    emit(c, dump(to_json(r)));
  } else {
    emit(c, std::string(kCsvVersionLine) + "\n" + spectral_csv_header() + "\n" + spectral_csv_row(r) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::vector<std::size_t> ns;
  std::vector<std::size_t> ks{1};
  std::vector<std::size_t> ds{4};
  std::size_t seeds = 1;
  std::string construction = "classical";
  std::size_t jobs = 1;
  double slack = 0.1;
};

struct SweepRow {
  std::size_t cell = 0;
  std::size_t k = 0;
  std::string text;
  bool ok = false;
  std::size_t n = 0, d = 0;
  double lambda = 0.0;
};

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

int cmd_sweep(const SweepArgs& a, const Common& c) {
  if (a.ns.empty()) throw InvalidArgument("sweep requires --n");
  if (c.out.empty()) throw InvalidArgument("sweep requires --out");
  if (a.construction != "classical" && a.construction != "matching") {
    throw InvalidArgument("sweep --construction must be classical or matching");
  }
  struct Cell {
    std::size_t n, d, replicate;
  };
  std::vector<Cell> cells;
  for (auto n : a.ns) {
    for (auto d : a.ds) {
      for (std::size_t r = 0; r < a.seeds; ++r) cells.push_back({n, d, r});
    }
  }
  const std::string header = "cell," + spectral_csv_header() + ",error";
  const std::filesystem::path partial = c.out + ".partial";
  std::ofstream part(partial, std::ios::trunc);
  if (!part) throw Error("cannot open " + partial.string());
  part << kCsvVersionLine << "\n" << header << "\n" << std::flush;

  std::vector<SweepRow> rows;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell cell = cells[idx];
      const std::uint64_t cell_seed = c.seed + idx;
      std::vector<SweepRow> local;
      std::optional<PermutationFamily> fam;
      std::string family_error;
      try {
        RngStream fs(cell_seed);
        fam = a.construction == "classical" ? hermitian_family(cell.n, cell.d, fs) : matching_family(cell.n, cell.d, fs);
      } catch (const std::exception& e) {
        family_error = e.what();
      }
      for (auto k : a.ks) {
        SweepRow row;
        row.cell = idx;
        row.k = k;
        row.n = cell.n;
        row.d = cell.d;
        try {
          if (!fam) throw Error(family_error);
          SolverOptions o = solver_options(c);
          o.mode = SpectralMode::eigen;
          o.count_unit = false;
          RngStream ss(cell_seed);
          const auto r = lambda_estimate(ClassicalTpeOperator(*fam, k, c.dim_cap), o, ss);
          row.text = std::to_string(idx) + "," + spectral_csv_row(r) + ",";
          row.ok = true;
          row.lambda = r.lambda;
        } catch (const std::exception& e) {
          row.text = std::to_string(idx) + "," + a.construction + "," + std::to_string(cell.n) + "," +
                     std::to_string(cell.d) + "," + std::to_string(k) + "," + std::to_string(cell_seed) +
                     ",,,,,,,," + sanitize(e.what());
        }
        local.push_back(std::move(row));
      }
      std::lock_guard lock(mu);
      for (auto& row : local) {
        part << row.text << "\n" << std::flush;
        rows.push_back(std::move(row));
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::max<std::size_t>(1, a.jobs); ++t) pool.emplace_back(worker);
  }
  part.close();

  std::sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
    return std::tie(x.cell, x.k) < std::tie(y.cell, y.k);
  });
  std::string text = std::string(kCsvVersionLine) + "\n" + header + "\n";
  for (const auto& r : rows) text += r.text + "\n";
  write_text_file(c.out, text);
  std::filesystem::remove(partial);

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<double>> groups;
  std::size_t failures = 0;
  for (const auto& r : rows) {
    if (r.ok) {
      groups[{r.n, r.d, r.k}].push_back(r.lambda);
    } else {
      ++failures;
    }
  }
  for (const auto& [key, v] : groups) {
    const auto [n, d, k] = key;
    const double ref = std::pow(ramanujan_reference(d), 1.0 / static_cast<double>(k + 1)) + a.slack;
    std::cout << "N=" << n << " D=" << d << " k=" << k << " count=" << v.size()
              << " min=" << format_double(quantile(v, 0.0)) << " q25=" << format_double(quantile(v, 0.25))
              << " median=" << format_double(quantile(v, 0.5)) << " q75=" << format_double(quantile(v, 0.75))
              << " max=" << format_double(quantile(v, 1.0)) << " reference=" << format_double(ref)
              << " within=" << (quantile(v, 1.0) <= ref ? "true" : "false") << "\n";
  }
  if (failures > 0) std::cout << "failed_rows=" << failures << "\n";
  return 0;
}

// ---------------------------------------------------------------- mix

struct MixArgs {
  std::string family;
  std::size_t k = 1;
  std::size_t steps = 30;
  std::size_t trials = 20;
  std::optional<double> lambda;
  std::optional<double> eps;
};

// Per-step worst case over all inputs.
void merge_worst(MixingTrace& acc, const MixingTrace& t) {
  if (acc.steps.empty()) {
    acc = t;
    return;
  }
  for (std::size_t i = 0; i < acc.steps.size(); ++i) {
    acc.steps[i].l2 = std::max(acc.steps[i].l2, t.steps[i].l2);
    acc.steps[i].l1 = std::max(acc.steps[i].l1, t.steps[i].l1);
    acc.steps[i].violated = acc.steps[i].violated || t.steps[i].violated;
  }
}

int cmd_mix(const MixArgs& a, const Common& c) {
  const Json j = read_json_file(a.family);
  const std::string type = j.value("type", "");
  const RngStream root(c.seed);
  MixingTrace worst;
  double lambda = 0.0;
  std::size_t n = 0;
  if (type == "classical") {
    const auto fam = permutation_family_from_json(j);
    const ClassicalTpeOperator op(fam, a.k, c.dim_cap);
    n = op.dim();
    if (a.lambda) {
      lambda = *a.lambda;
    } else {
      SolverOptions o = solver_options(c);
      o.mode = fam.hermitian ? SpectralMode::eigen : SpectralMode::singular;
      RngStream s = root.split(a.trials);
      lambda = lambda_estimate(op, o, s).lambda;
    }
    for (std::size_t t = 0; t < a.trials; ++t) {
      RngStream s = root.split(t);
      std::vector<double> p(op.dim(), 0.0);
      p[s.uniform_below(op.dim())] = 1.0;
      merge_worst(worst, iterate_classical(op, p, a.steps, lambda));
    }
  } else {
    KrausChannel ch;
    if (type == "quantum") {
      ch = unitary_mixture(unitary_family_from_json(j));
    } else if (type == "channel") {
      ch = channel_from_json(j);
    } else {
      throw InvalidArgument("family file has unknown type '" + type + "'");
    }
    n = ch.size();
    if (n > 64) throw CapExceeded("mix: dense channel iteration is limited to N <= 64");
    if (a.lambda) {
      lambda = *a.lambda;
    } else {
      SolverOptions o = solver_options(c);
      o.mode = ch.hermitian ? SpectralMode::eigen : SpectralMode::singular;
      RngStream s = root.split(a.trials);
      lambda = channel_gap(ch, o, s).lambda;
    }
    for (std::size_t t = 0; t < a.trials; ++t) {
      RngStream s = root.split(t);
      merge_worst(worst, iterate_channel(ch, random_pure_state(n, s), a.steps, lambda));
    }
  }
  worst.seed = c.seed;
  std::string text = std::string(kCsvVersionLine) + "\n" + mixing_csv_header() + "\n";
  for (const auto& row : mixing_csv_rows(worst)) text += row + "\n";
  emit(c, text);

  std::ostream& info = c.out.empty() ? std::cerr : std::cout;
  info << "lambda=" << format_double(lambda);
  if (lambda >= 1.0) info << " (no gap: bounds are uninformative)";
  if (a.eps && lambda > 0.0 && lambda < 1.0) {
    const std::size_t m = required_iterations(lambda, n, *a.eps);
    info << " required_iterations=" << m;
    if (type != "classical") {
      const std::size_t degree = worst.degree;
      info << " word_count=" << word_count(degree, m).decimal
           << " exponent=" << format_double(word_count_exponent(degree, lambda));
    }
  }
  info << " violations=" << (worst.any_violation() ? "yes" : "no") << "\n";
  return worst.any_violation() ? kExitCheckFailed : 0;
}

// ---------------------------------------------------------------- verify / lemma

int cmd_verify(const std::string& suite, const VerifyParams& params, const Common& c) {
  const VerifyReport rep = run_verify_suite(suite, params);
  emit(c, dump(rep.to_json()));
  for (const auto& chk : rep.checks) {
    if (!chk.passed) std::cerr << "FAILED " << chk.name << ": " << chk.detail << " [" << chk.reference << "]\n";
  }
  return rep.passed() ? 0 : kExitCheckFailed;
}

int cmd_lemma(std::size_t instances, const Common& c) {
  const RngStream root(c.seed);
  std::string text;
  Json arr = Json::array();
  if (c.format == "csv") text = std::string(kCsvVersionLine) + "\n" + lemma_csv_header() + "\n";
  std::size_t violations = 0;
  double worst = 1.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto inst = sample_lemma_case(i, root);
    const auto chk = check_lemma(inst);
    violations += chk.pass ? 0 : 1;
    worst = std::min(worst, chk.margin);
    if (c.format == "csv") {
      text += lemma_csv_row(inst, chk) + "\n";
    } else {
      Json e;
      e["dim"] = inst.dim;
      e["rank_pi"] = inst.rank_pi;
      e["eps_x"] = inst.eps_x;
      e["eps_y"] = inst.eps_y;
      e["p"] = inst.p;
      e["norm"] = chk.norm;
      e["bound"] = chk.bound_intermediate;
      e["margin"] = chk.margin;
      e["pass"] = chk.pass;
      arr.push_back(std::move(e));
    }
  }
  emit(c, c.format == "csv" ? text : dump(arr));
  (c.out.empty() ? std::cerr : std::cout) << "instances=" << instances << " violations=" << violations
                                          << " min_margin=" << format_double(worst) << "\n";
  return violations == 0 ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tpe-lab: tensor product expander experiments"};
  app.require_subcommand(1);
  Common common;

  auto add_common = [&common](CLI::App* cmd, bool seed_required) {
    auto* opt = cmd->add_option("--seed", common.seed, "Random seed (never defaulted)");
    if (seed_required) opt->required();
    cmd->add_option("--out", common.out, "Output file (default: standard output)");
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    return opt;
  };

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a family or channel file");
  gen_cmd->add_option("kind", gen.kind, "classical|quantum|matching|doubled|cayley|sign|z-phase|z-phase-hermitian")
      ->required()
      ->check(CLI::IsMember(
          {"classical", "quantum", "matching", "doubled", "cayley", "sign", "z-phase", "z-phase-hermitian"}));
  auto* gen_seed = add_common(gen_cmd, false);
  add_solver_flags(gen_cmd, common);
  gen_cmd->add_option("--n", gen.n, "Ground-set size N (group order for cayley)");
  gen_cmd->add_option("--d", gen.d, "Degree D")->capture_default_str();
  gen_cmd->add_option("--base", gen.base, "Base family file (doubled)");
  gen_cmd->add_option("--family", gen.family, "Permutation family file (sign, z-phase)");
  gen_cmd->add_option("--generators", gen.generators, "Generators of Z_N (cayley)");
  gen_cmd->add_flag("--non-hermitian", gen.non_hermitian, "quantum: all members Haar i.i.d.");
  gen_cmd->add_option("--epsilon", gen.epsilon, "z-phase: 2-copy gap (measured when omitted)");

  SpectrumArgs spec;
  auto* spec_cmd = app.add_subcommand("spectrum", "Leading nontrivial eigenvalue or singular value");
  spec_cmd->add_option("family", spec.family, "Family or channel file")->required()->check(CLI::ExistingFile);
  add_common(spec_cmd, true);
  add_solver_flags(spec_cmd, common);
  spec_cmd->add_option("--k", spec.k, "Copies")->capture_default_str();
  spec_cmd->add_option("--mode", spec.mode, "eigen|singular (default: eigen iff Hermitian)")
      ->check(CLI::IsMember({"eigen", "singular"}));
  spec_cmd->add_option("--dump-vector", spec.dump_vector, "Write the leading vector as JSON");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid of spectral measurements");
  add_common(sweep_cmd, true);
  add_solver_flags(sweep_cmd, common);
  sweep_cmd->add_option("--n", sweep.ns, "Sizes")->required()->delimiter(',');
  sweep_cmd->add_option("--k", sweep.ks, "Copies")->delimiter(',');
  sweep_cmd->add_option("--d", sweep.ds, "Degrees")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Replicates per (N, D)")->capture_default_str();
  sweep_cmd->add_option("--construction", sweep.construction, "classical|matching")->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads")->capture_default_str();
  sweep_cmd->add_option("--slack", sweep.slack, "Summary reference: lambda_H^{1/(k+1)} + slack")
      ->capture_default_str();

  MixArgs mix;
  auto* mix_cmd = app.add_subcommand("mix", "Mixing traces against the lambda^m bounds");
  mix_cmd->add_option("family", mix.family, "Family or channel file")->required()->check(CLI::ExistingFile);
  add_common(mix_cmd, true);
  add_solver_flags(mix_cmd, common);
  mix_cmd->add_option("--k", mix.k, "Copies (classical families)")->capture_default_str();
  mix_cmd->add_option("--steps", mix.steps, "Largest m")->capture_default_str();
  mix_cmd->add_option("--trials", mix.trials, "Random inputs")->capture_default_str();
  mix_cmd->add_option("--lambda", mix.lambda, "Use this lambda instead of measuring it");
  mix_cmd->add_option("--eps", mix.eps, "Report required_iterations and word_count for this eps");

  std::string suite;
  VerifyParams vparams;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(verify_suite_names()));
  add_common(verify_cmd, true);
  verify_cmd->add_option("--instances", vparams.instances, "lemma: instances")->capture_default_str();
  verify_cmd->add_option("--samples", vparams.samples, "moments: samples")->capture_default_str();
  verify_cmd->add_option("--families", vparams.families, "theorem3/mixing: families")->capture_default_str();

  std::size_t lemma_instances = 10000;
  auto* lemma_cmd = app.add_subcommand("lemma", "Randomized check of the mixed-norm bound");
  add_common(lemma_cmd, true);
  lemma_cmd->add_option("--instances", lemma_instances, "Instances")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, common, gen_seed->count() > 0);
    if (*spec_cmd) return cmd_spectrum(spec, common);
    if (*sweep_cmd) return cmd_sweep(sweep, common);
    if (*mix_cmd) return cmd_mix(mix, common);
    if (*verify_cmd) {
      vparams.seed = common.seed;
      return cmd_verify(suite, vparams, common);
    }
    if (*lemma_cmd) return cmd_lemma(lemma_instances, common);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
