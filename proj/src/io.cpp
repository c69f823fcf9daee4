#include "tpe/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tpe/errors.hpp"

namespace tpe {

namespace {

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const Json& rows, std::size_t n, const char* what) {
  if (!rows.is_array() || rows.size() != n) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(n) + " rows");
  }
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || row.size() != n) {
      throw InvalidArgument(std::string(what) + ": row " + std::to_string(i) + " must have " + std::to_string(n) +
                            " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Json& e = row[j];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InvalidArgument(std::string(what) + ": entries must be [re, im] pairs");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

void expect_type(const Json& j, const char* type) {
  if (!j.is_object() || !j.contains("type") || j["type"] != type) {
    throw InvalidArgument(std::string("expected a JSON object with \"type\": \"") + type + "\"");
  }
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing field \"") + key + "\"");
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

Json to_json(const PermutationFamily& family) {
  Json j;
  j["type"] = "classical";
  j["N"] = family.size();
  j["D"] = family.degree();
  j["hermitian"] = family.hermitian;
  j["seed"] = family.seed;
  j["construction"] = std::string(to_string(family.construction));
  Json perms = Json::array();
  for (const auto& p : family.members) perms.push_back(std::vector<std::uint32_t>(p.images().begin(), p.images().end()));
  j["perms"] = std::move(perms);
  return j;
}

PermutationFamily permutation_family_from_json(const Json& j) {
  expect_type(j, "classical");
  PermutationFamily family;
  const auto n = field<std::size_t>(j, "N");
  const auto d = field<std::size_t>(j, "D");
  family.hermitian = field<bool>(j, "hermitian");
  family.seed = field<std::uint64_t>(j, "seed");
  family.construction = construction_from_string(field<std::string>(j, "construction"));
  const auto perms = field<std::vector<std::vector<std::uint32_t>>>(j, "perms");
  if (perms.size() != d) throw InvalidArgument("\"perms\" must hold D permutations");
  for (const auto& images : perms) {
    if (images.size() != n) throw InvalidArgument("every permutation must have N images");
    family.members.emplace_back(images);
  }
  family.validate();
  return family;
}

Json to_json(const UnitaryFamily& family) {
  Json j;
  j["type"] = "quantum";
  j["N"] = family.size();
  j["D"] = family.degree();
  j["hermitian"] = family.hermitian;
  j["seed"] = family.seed;
  Json mats = Json::array();
  for (const auto& u : family.members) mats.push_back(matrix_to_json(u));
  j["unitaries"] = std::move(mats);
  return j;
}

UnitaryFamily unitary_family_from_json(const Json& j) {
  expect_type(j, "quantum");
  UnitaryFamily family;
  const auto n = field<std::size_t>(j, "N");
  const auto d = field<std::size_t>(j, "D");
  family.hermitian = field<bool>(j, "hermitian");
  family.seed = field<std::uint64_t>(j, "seed");
  if (!j.contains("unitaries") || !j["unitaries"].is_array() || j["unitaries"].size() != d) {
    throw InvalidArgument("\"unitaries\" must hold D matrices");
  }
  for (const auto& m : j["unitaries"]) family.members.push_back(matrix_from_json(m, n, "unitaries"));
  family.validate();
  return family;
}

Json to_json(const KrausChannel& channel) {
  Json j;
  j["type"] = "channel";
  j["tag"] = std::string(to_string(channel.tag));
  j["N"] = channel.size();
  Json mats = Json::array();
  for (const auto& a : channel.kraus) mats.push_back(matrix_to_json(a));
  j["kraus"] = std::move(mats);
  return j;
}

KrausChannel channel_from_json(const Json& j) {
  expect_type(j, "channel");
  KrausChannel ch;
  ch.tag = channel_tag_from_string(field<std::string>(j, "tag"));
  const auto n = field<std::size_t>(j, "N");
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
    throw InvalidArgument("\"kraus\" must be a non-empty array");
  }
  for (const auto& m : j["kraus"]) ch.kraus.push_back(matrix_from_json(m, n, "kraus"));
  // Hermiticity is a property of the Kraus set, so it is recomputed.
  ch.hermitian = false;
  ch.validate();
  KrausChannel probe = ch;
  probe.hermitian = true;
  try {
    probe.validate();
    ch.hermitian = true;
  } catch (const InvalidArgument&) {
  }
  return ch;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("write to " + path.string() + " failed");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string spectral_csv_header() {
  return "construction,N,D,k,seed,mode,lambda,lambda_H,unit_mult,iters,converged,residual";
}

std::string spectral_csv_row(const SpectralReport& r) {
  std::ostringstream os;
  os << r.construction << ',' << r.n << ',' << r.degree << ',' << r.k << ',' << r.seed << ',' << to_string(r.mode)
     << ',' << format_double(r.lambda) << ',' << format_double(r.lambda_h) << ',' << r.unit_mult << ','
     << r.iterations << ',' << (r.converged ? "true" : "false") << ',' << format_double(r.residual);
  return os.str();
}

std::string mixing_csv_header() { return "construction,N,D,k,seed,m,l2,l1,bound_l2,bound_l1,violated"; }

std::vector<std::string> mixing_csv_rows(const MixingTrace& t) {
  std::vector<std::string> rows;
  for (const auto& s : t.steps) {
    std::ostringstream os;
    os << t.construction << ',' << t.n << ',' << t.degree << ',' << t.k << ',' << t.seed << ',' << s.m << ','
       << format_double(s.l2) << ',' << format_double(s.l1) << ','
       << (t.lambda_ref ? format_double(s.bound_l2) : "") << ',' << (t.lambda_ref ? format_double(s.bound_l1) : "")
       << ',' << (s.violated ? "true" : "false");
    rows.push_back(os.str());
  }
  return rows;
}

std::string lemma_csv_header() { return "dim,rank_pi,eps_x,eps_y,p,norm,bound,margin,pass"; }

std::string lemma_csv_row(const LemmaInstance& inst, const LemmaCheck& check) {
  std::ostringstream os;
  os << inst.dim << ',' << inst.rank_pi << ',' << format_double(inst.eps_x) << ',' << format_double(inst.eps_y) << ','
     << format_double(inst.p) << ',' << format_double(check.norm) << ',' << format_double(check.bound_intermediate)
     << ',' << format_double(check.margin) << ',' << (check.pass ? "true" : "false");
  return os.str();
}

Json to_json(const SpectralReport& r) {
  Json j;
  j["construction"] = r.construction;
  j["N"] = r.n;
  j["D"] = r.degree;
  j["k"] = r.k;
  j["seed"] = r.seed;
  j["mode"] = std::string(to_string(r.mode));
  j["method"] = r.method;
  j["lambda"] = r.lambda;
  j["signed_lambda"] = r.signed_lambda;
  j["lambda_H"] = r.lambda_h;
  j["unit_mult"] = r.unit_mult;
  j["iters"] = r.iterations;
  j["converged"] = r.converged;
  j["residual"] = r.residual;
  return j;
}

}  // namespace tpe
