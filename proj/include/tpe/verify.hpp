#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tpe/io.hpp"

namespace tpe {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  // The property the check exercises.
  std::string reference;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;

  bool passed() const;
  Json to_json() const;
};

struct VerifyParams {
  std::uint64_t seed = 1;
  std::size_t instances = 10000;  // lemma
  std::size_t samples = 20000;    // moments
  std::size_t families = 5;       // theorem3, mixing
};

// Suites: identities, counterexamples, theorem3, lemma, mixing, moments.
// Throws InvalidArgument for an unknown suite name.
VerifyReport run_verify_suite(std::string_view suite, const VerifyParams& params);

const std::vector<std::string>& verify_suite_names();

}  // namespace tpe
