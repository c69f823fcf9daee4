#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpe/channel.hpp"
#include "tpe/lemma.hpp"
#include "tpe/mixing.hpp"
#include "tpe/permutation.hpp"
#include "tpe/quantum_tpe.hpp"
#include "tpe/spectral.hpp"

namespace tpe {

using Json = nlohmann::ordered_json;

// First line of every CSV file written by the toolkit.
inline constexpr const char* kCsvVersionLine = "#tpe-lab-csv-v1";

Json to_json(const PermutationFamily& family);
Json to_json(const UnitaryFamily& family);
Json to_json(const KrausChannel& channel);

// Parse and validate. Throw InvalidArgument on a wrong "type" or malformed data.
PermutationFamily permutation_family_from_json(const Json& j);
UnitaryFamily unitary_family_from_json(const Json& j);
KrausChannel channel_from_json(const Json& j);

// Two-space indented dump with a trailing newline; byte-stable for fixed input.
std::string dump(const Json& j);

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

// 64-bit FNV-1a of the bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

std::string spectral_csv_header();
std::string spectral_csv_row(const SpectralReport& r);

std::string mixing_csv_header();
std::vector<std::string> mixing_csv_rows(const MixingTrace& t);

std::string lemma_csv_header();
std::string lemma_csv_row(const LemmaInstance& inst, const LemmaCheck& check);

Json to_json(const SpectralReport& r);

}  // namespace tpe
