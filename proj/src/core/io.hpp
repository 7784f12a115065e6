#pragma once

// JSON schemas and report plumbing.
//
// Matrix:          {"dim": d, "entries": [[re, im], ...]}   row-major, d*d pairs
// ScalarFunction:  {"variant": "gaussian",   "terms": [{"coef":[re,im],"width":a,"center":b,"degree":k}, ...]}
//                  {"variant": "rational",   "terms": [{"coef":[re,im],"pole":[re,im],"order":m}, ...]}
//                  {"variant": "polynomial", "coeffs": [c0, c1, ...]}
//
// CSV output is RFC-4180 (CRLF line ends, comma separators, header row).

#include <string>

#include <nlohmann/json.hpp>

#include "cmat.hpp"
#include "perturbation.hpp"
#include "scalar_function.hpp"

namespace specshift {

using json = nlohmann::json;

json matrix_to_json(const CMat& a);
CMat matrix_from_json(const json& j);
HermitianMatrix hermitian_from_json(const json& j);

CMat load_matrix(const std::string& path);
HermitianMatrix load_hermitian(const std::string& path);
void save_matrix(const CMat& a, const std::string& path);

json function_to_json(const ScalarFunction& f);
ScalarFunction function_from_json(const json& j);
// Presets: "gaussian" = e^{-x^2}; "rational" = -2x/(1+x^2) (conjugate pole
// pair); "polynomial" = x^3.  Anything starting with '@' loads a JSON file;
// anything starting with '{' parses inline JSON.
ScalarFunction function_from_spec(const std::string& spec);

json step_function_to_json(const StepFunction& xi);

// FNV-1a 64-bit over the canonical (sorted-key) dump; used as the config /
// report fingerprint.
std::string fnv1a_hex(const std::string& bytes);
std::string json_fingerprint(const json& j);

// CSV assembly (RFC-4180)
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& cells);
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  size_t columns_;
};

std::string format_double(double v);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace specshift
