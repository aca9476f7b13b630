#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "drinfeld/error.hpp"
#include "drinfeld/module.hpp"
#include "drinfeld/torsion.hpp"

namespace drinfeld::cli {

using nlohmann::json;

struct FieldSpec {
  std::uint32_t p = 2;
  int k = 1;
  std::optional<std::vector<std::uint32_t>> modulus;
};

/// One CLI job: a module over F_q(t) plus command-specific arguments.
struct JobSpec {
  FieldSpec field;
  std::string var = "t";
  std::string ext_var = "u";
  std::vector<std::string> module;
  std::vector<std::string> points;
  std::optional<std::string> place;
  std::optional<std::string> b;
  std::optional<std::string> embedding;  // image of t in the extension variable
  int level = 0;
  int n_max = kDefaultNMax;
  std::uint64_t seed = 1;
  int count = 100;
};

/// DRINFELD_N_MAX, when set to a positive integer.
inline int default_n_max() {
  const char* env = std::getenv("DRINFELD_N_MAX");
  if (!env || !*env) return kDefaultNMax;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 1000000) throw InputError(std::string("DRINFELD_N_MAX must be a positive integer, got '") + env + "'");
  return static_cast<int>(v);
}

namespace detail {

template <class T>
T get_field(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(where + "." + key + ": missing or of the wrong type");
  }
}

inline std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw InputError(where + ": expected a string or a list of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string()) {
      out.push_back(e.get<std::string>());
    } else if (e.is_number_integer()) {
      out.push_back(std::to_string(e.get<long long>()));
    } else {
      throw InputError(where + ": expected strings");
    }
  }
  return out;
}

}  // namespace detail

inline JobSpec parse_job(const json& j) {
  if (!j.is_object()) throw InputError("job: expected a JSON object");
  JobSpec job;
  job.n_max = default_n_max();
  if (!j.contains("field")) throw InputError("job.field: missing");
  const json& f = j.at("field");
  if (f.is_number_integer()) {
    job.field.p = f.get<std::uint32_t>();
  } else {
    job.field.p = detail::get_field<std::uint32_t>(f, "p", "job.field");
    if (f.contains("k")) job.field.k = detail::get_field<int>(f, "k", "job.field");
    if (f.contains("modulus")) job.field.modulus = detail::get_field<std::vector<std::uint32_t>>(f, "modulus", "job.field");
  }
  if (j.contains("var")) job.var = detail::get_field<std::string>(j, "var", "job");
  if (j.contains("ext_var")) job.ext_var = detail::get_field<std::string>(j, "ext_var", "job");
  if (j.contains("module")) job.module = detail::string_list(j.at("module"), "job.module");
  if (j.contains("point")) job.points = detail::string_list(j.at("point"), "job.point");
  if (j.contains("points")) job.points = detail::string_list(j.at("points"), "job.points");
  if (j.contains("place")) job.place = detail::get_field<std::string>(j, "place", "job");
  if (j.contains("b")) job.b = detail::get_field<std::string>(j, "b", "job");
  if (j.contains("embedding")) job.embedding = detail::get_field<std::string>(j, "embedding", "job");
  if (j.contains("level")) job.level = detail::get_field<int>(j, "level", "job");
  if (j.contains("n_max")) job.n_max = detail::get_field<int>(j, "n_max", "job");
  if (j.contains("seed")) job.seed = detail::get_field<std::uint64_t>(j, "seed", "job");
  if (j.contains("count")) job.count = detail::get_field<int>(j, "count", "job");
  if (job.level < 0) throw InputError("job.level: must be nonnegative");
  if (job.n_max < 1) throw InputError("job.n_max: must be at least 1");
  if (job.embedding && job.level > 0) throw InputError("job: embedding and level are mutually exclusive");
  if (job.count < 0) throw InputError("job.count: must be nonnegative");
  return job;
}

inline JobSpec parse_job_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("job: invalid JSON: ") + e.what());
  }
  return parse_job(j);
}

inline FunctionField make_field(const JobSpec& job) {
  return FunctionField{FiniteField::create(job.field.p, job.field.k, job.field.modulus), job.var, 1};
}

inline RatFunc parse_in(const FieldRef& f, const std::string& text, const std::string& var, const std::string& where) {
  try {
    return RatFunc::parse(f, text, var);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

inline DrinfeldModule make_module(const JobSpec& job) {
  if (job.module.empty()) throw InputError("job.module: missing");
  const FunctionField k = make_field(job);
  std::vector<RatFunc> coeffs;
  for (std::size_t i = 0; i < job.module.size(); ++i) {
    coeffs.push_back(parse_in(k.fq, job.module[i], k.var, "job.module[" + std::to_string(i) + "]"));
  }
  if (coeffs.size() < 2) throw InputError("job.module: need at least two coefficients (rank >= 1)");
  if (coeffs.back().is_zero()) throw InputError("job.module: leading coefficient is zero");
  return DrinfeldModule(k, std::move(coeffs));
}

inline bool in_extension(const JobSpec& job) { return job.level > 0 || job.embedding.has_value(); }

/// Points live in the base variable, or in the extension variable when the
/// job works over an extension.
inline std::vector<RatFunc> make_points(const JobSpec& job, const FieldRef& f) {
  const std::string& var = in_extension(job) ? job.ext_var : job.var;
  std::vector<RatFunc> out;
  for (std::size_t i = 0; i < job.points.size(); ++i) {
    out.push_back(parse_in(f, job.points[i], var, "job.point[" + std::to_string(i) + "]"));
  }
  return out;
}

/// "inf" or a monic irreducible polynomial in the base variable.
inline Place make_place(const FunctionField& k, const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "v_inf") return infinity_of(k);
  Poly p;
  try {
    p = parse_poly(k.fq, text, k.var);
  } catch (const InputError& e) {
    throw InputError(std::string("job.place: ") + e.what());
  }
  if (p.degree() < 1) throw InputError("job.place: place polynomial must be non-constant");
  p = p.monic();
  if (!is_irreducible(p)) throw InputError("job.place: " + p.to_string(k.var) + " is reducible");
  return Place::finite_unchecked(p, k.ext_degree);
}

inline SubstitutionEmbedding make_embedding(const JobSpec& job, const FieldRef& f) {
  RatFunc img = parse_in(f, *job.embedding, job.ext_var, "job.embedding");
  if (img.is_constant()) throw InputError("job.embedding: image must be non-constant");
  return SubstitutionEmbedding(std::move(img), job.var, job.ext_var);
}

/// b in F_q[t]; always written in the base variable.
inline Poly make_b(const JobSpec& job, const FieldRef& f) {
  if (!job.b) throw InputError("job.b: missing");
  try {
    return parse_poly(f, *job.b, job.var);
  } catch (const InputError& e) {
    throw InputError(std::string("job.b: ") + e.what());
  }
}

}  // namespace drinfeld::cli
