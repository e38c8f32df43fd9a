#pragma once
// Problem specification files: JSON with complex scalars as [re, im] (a bare
// number is read as a real scalar) and matrices as row-major nested arrays.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include "json.hpp"

#include "../gencorr.hpp"

namespace interact::cli {

using nlohmann::json;

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { interaction, endo_transfer, partial_isometry };

struct ProblemSpec {
  Mode mode = Mode::interaction;
  AlgebraDescriptor algebra{std::vector<int>{1}};
  Mat V, H;          // interaction mode
  Mat alpha, L;      // endo_transfer mode
  AlgebraDescriptor ambient{std::vector<int>{1}};  // partial_isometry mode
  std::vector<Element> embedding;
  std::optional<Element> S;
  std::optional<double> tolerance;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
};

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::endo_transfer: return "endo_transfer";
    case Mode::partial_isometry: return "partial_isometry";
    default: return "interaction";
  }
}

namespace detail {

inline cplx scalar(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw SpecError(where + ": expected a number or [re, im]");
}

inline Mat matrix(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw SpecError(where + ": expected " + std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw SpecError(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      m(r, c) = scalar(row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

inline AlgebraDescriptor blocks(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SpecError(where + ": expected a non-empty list of block sizes");
  std::vector<int> b;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<int>() < 1) throw SpecError(where + ": block sizes must be positive integers");
    b.push_back(x.get<int>());
  }
  return AlgebraDescriptor(b);
}

inline Element element(const json& j, const AlgebraDescriptor& alg, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != alg.block_count())
    throw SpecError(where + ": expected " + std::to_string(alg.block_count()) + " blocks");
  std::vector<Mat> bl;
  for (int i = 0; i < alg.block_count(); ++i) {
    int d = alg.block_size(i);
    bl.push_back(matrix(j[i], d, d, where + ".block" + std::to_string(i)));
  }
  return Element(alg, bl);
}

inline const json& field(const json& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace detail

inline ProblemSpec parse_spec(const json& j) {
  if (!j.is_object()) throw SpecError("specification must be a JSON object");
  ProblemSpec s;
  std::string mode = j.value("mode", std::string("interaction"));
  if (mode == "interaction") s.mode = Mode::interaction;
  else if (mode == "endo_transfer") s.mode = Mode::endo_transfer;
  else if (mode == "partial_isometry") s.mode = Mode::partial_isometry;
  else throw SpecError("unknown mode \"" + mode + "\"");

  s.algebra = detail::blocks(detail::field(j, "blocks"), "blocks");
  const int n = s.algebra.dim();
  switch (s.mode) {
    case Mode::interaction:
      s.V = detail::matrix(detail::field(j, "V"), n, n, "V");
      s.H = detail::matrix(detail::field(j, "H"), n, n, "H");
      break;
    case Mode::endo_transfer:
      s.alpha = detail::matrix(detail::field(j, "alpha"), n, n, "alpha");
      s.L = detail::matrix(detail::field(j, "L"), n, n, "L");
      break;
    case Mode::partial_isometry: {
      s.ambient = detail::blocks(detail::field(j, "ambient_blocks"), "ambient_blocks");
      const json& e = detail::field(j, "embedding");
      if (!e.is_array() || static_cast<int>(e.size()) != n)
        throw SpecError("embedding: expected one element per basis element of A (" + std::to_string(n) + ")");
      for (int k = 0; k < n; ++k)
        s.embedding.push_back(detail::element(e[k], s.ambient, "embedding[" + std::to_string(k) + "]"));
      s.S = detail::element(detail::field(j, "S"), s.ambient, "S");
      break;
    }
  }
  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number() || !(j["tolerance"].get<double>() > 0.0))
      throw SpecError("tolerance must be a positive number");
    s.tolerance = j["tolerance"].get<double>();
  }
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<int>() < 1)
      throw SpecError("samples must be a positive integer");
    s.samples = j["samples"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SpecError("seed must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  return s;
}

// Throws json::parse_error on malformed input and SpecError on schema violations.
inline ProblemSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read " + path.string());
  return parse_spec(json::parse(in));
}

// Residual formatting: values below 1e-12 print as 0, others with 4 significant digits.
inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::abs(x) < 1e-12) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return std::strtod(buf, nullptr);
}

inline json to_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

inline json to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace interact::cli
