#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "sympcon/liecore.hpp"
#include "sympcon/rootsys.hpp"
#include "sympcon/sympdata.hpp"

namespace sympcon {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kConventionVersion = "cv1";
inline constexpr const char* kToolVersion = "0.1.0";

inline json to_json(const RootSystem& rs) {
  json j;
  j["kind"] = kind_name(rs.kind);
  j["rank"] = rs.rank;
  j["roots"] = rs.roots;
  json cart = json::array();
  for (const auto& row : rs.cartan) {
    json r = json::array();
    for (const auto& x : row) r.push_back(static_cast<long>(num(x)));
    cart.push_back(r);
  }
  j["cartan"] = cart;
  j["long"] = rs.long_flags;
  return j;
}

/// {dim, c: [[i, j, [[k, num, den], ...]], ...], killing: [[...]]} with exact
/// entries as decimal strings.
inline json algebra_to_json(const LieAlgebra<Rational>& L) {
  json j;
  j["dim"] = L.dim;
  j["name"] = L.name;
  j["labels"] = L.labels;
  json c = json::array();
  for (std::size_t i = 0; i < L.dim; ++i)
    for (std::size_t k = i + 1; k < L.dim; ++k) {
      const auto& sv = L.bracket_table[i][k - i - 1];
      if (sv.empty()) continue;
      json terms = json::array();
      for (const auto& [idx, v] : sv)
        terms.push_back(json::array({idx, num(v).str(), den(v).str()}));
      c.push_back(json::array({i, k, terms}));
    }
  j["c"] = c;
  json killing = json::array();
  for (const auto& row : L.killing) {
    json r = json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    killing.push_back(r);
  }
  j["killing"] = killing;
  return j;
}

inline LieAlgebra<Rational> algebra_from_json(const json& j) {
  std::size_t dim = j.at("dim").get<std::size_t>();
  std::vector<std::vector<SparseVec<Rational>>> table(dim);
  for (std::size_t i = 0; i < dim; ++i) table[i].resize(dim - i - 1);
  for (const auto& entry : j.at("c")) {
    std::size_t i = entry.at(0).get<std::size_t>();
    std::size_t k = entry.at(1).get<std::size_t>();
    SparseVec<Rational> sv;
    for (const auto& t : entry.at(2)) {
      Rational v(BigInt(t.at(1).get<std::string>()), BigInt(t.at(2).get<std::string>()));
      sv.emplace_back(t.at(0).get<std::size_t>(), v);
    }
    table[i][k - i - 1] = std::move(sv);
  }
  auto L = make_lie_algebra(dim, j.value("labels", std::vector<std::string>{}), std::move(table),
                            j.value("name", std::string{}));
  // Killing is recomputed from the table; the stored copy is not trusted.
  return L;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Content-addressed structure-constant cache. Corruption is detected by a
/// content hash plus a fresh Jacobi audit on load.
class AlgebraCache {
 public:
  explicit AlgebraCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::optional<LieAlgebra<Rational>> load(const std::string& key) const {
    auto path = file_of(key);
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    if (j.value("convention_version", "") != kConventionVersion) return std::nullopt;
    json payload = j.at("algebra");
    if (fnv1a(payload.dump()) != j.value("content_hash", std::uint64_t(0))) return std::nullopt;
    auto L = algebra_from_json(payload);
    if (!jacobi_audit(L)) return std::nullopt;
    return L;
  }

  void store(const std::string& key, const LieAlgebra<Rational>& L) const {
    json payload = algebra_to_json(L);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["convention_version"] = kConventionVersion;
    j["content_hash"] = fnv1a(payload.dump());
    j["algebra"] = std::move(payload);
    std::ofstream out(file_of(key));
    out << j.dump(1) << "\n";
  }

  std::filesystem::path file_of(const std::string& key) const {
    std::string safe;
    for (char c : key) safe += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return dir_ / (safe + "_" + kConventionVersion + ".json");
  }

 private:
  std::filesystem::path dir_;
};

inline json to_json(const CheckReport& rep) {
  json checks = json::array();
  for (const auto& c : rep.checks) {
    json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    if (!c.witness.empty()) e["witness"] = c.witness;
    checks.push_back(e);
  }
  return checks;
}

}  // namespace sympcon
