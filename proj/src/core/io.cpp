#include "io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace specshift {

json matrix_to_json(const CMat& a) {
  json entries = json::array();
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      entries.push_back({a(i, j).real(), a(i, j).imag()});
  return json{{"dim", a.dim()}, {"entries", std::move(entries)}};
}

CMat matrix_from_json(const json& j) {
  try {
    require(j.contains("dim") && j.contains("entries"), Errc::parse,
            "matrix json needs 'dim' and 'entries'");
    const int d = j.at("dim").get<int>();
    require(d >= 1, Errc::parse, "matrix dim must be >= 1 (empty matrices rejected)");
    const auto& e = j.at("entries");
    require(e.is_array() && e.size() == static_cast<size_t>(d) * d, Errc::parse,
            "matrix 'entries' must hold dim*dim [re, im] pairs (row-major)");
    CMat a(d);
    size_t idx = 0;
    for (int i = 0; i < d; ++i) {
      for (int jj = 0; jj < d; ++jj, ++idx) {
        const auto& pr = e.at(idx);
        require(pr.is_array() && pr.size() == 2, Errc::parse,
                "matrix entry " + std::to_string(idx) + " is not an [re, im] pair");
        a(i, jj) = cx(pr.at(0).get<double>(), pr.at(1).get<double>());
      }
    }
    return a;
  } catch (const json::exception& ex) {
    fail(Errc::parse, std::string("matrix json: ") + ex.what());
  }
}

HermitianMatrix hermitian_from_json(const json& j) {
  return HermitianMatrix::from(matrix_from_json(j));
}

CMat load_matrix(const std::string& path) {
  json j;
  try {
    std::ifstream in(path);
    require(in.good(), Errc::io, "cannot open " + path);
    in >> j;
  } catch (const json::exception& ex) {
    fail(Errc::parse, path + ": " + ex.what());
  }
  return matrix_from_json(j);
}

HermitianMatrix load_hermitian(const std::string& path) {
  return HermitianMatrix::from(load_matrix(path));
}

void save_matrix(const CMat& a, const std::string& path) {
  write_text_file(path, matrix_to_json(a).dump(2) + "\n");
}

json function_to_json(const ScalarFunction& f) {
  json j;
  switch (f.kind()) {
    case ScalarFunction::Kind::gaussian: {
      j["variant"] = "gaussian";
      json terms = json::array();
      for (const auto& t : f.gaussian_terms())
        terms.push_back({{"coef", {t.coef.real(), t.coef.imag()}},
                         {"width", t.width},
                         {"center", t.center},
                         {"degree", t.degree}});
      j["terms"] = std::move(terms);
      break;
    }
    case ScalarFunction::Kind::rational: {
      j["variant"] = "rational";
      json terms = json::array();
      for (const auto& t : f.rational_terms())
        terms.push_back({{"coef", {t.coef.real(), t.coef.imag()}},
                         {"pole", {t.pole.real(), t.pole.imag()}},
                         {"order", t.order}});
      j["terms"] = std::move(terms);
      break;
    }
    case ScalarFunction::Kind::polynomial:
      j["variant"] = "polynomial";
      j["coeffs"] = f.polynomial_coeffs();
      break;
  }
  return j;
}

namespace {

cx pair_to_cx(const json& j) {
  require(j.is_array() && j.size() == 2, Errc::parse, "expected an [re, im] pair");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

ScalarFunction function_from_json(const json& j) {
  try {
    const std::string variant = j.at("variant").get<std::string>();
    if (variant == "gaussian") {
      std::vector<ScalarFunction::GaussianTerm> terms;
      for (const auto& t : j.at("terms"))
        terms.push_back({pair_to_cx(t.at("coef")), t.at("width").get<double>(),
                         t.at("center").get<double>(), t.value("degree", 0)});
      return ScalarFunction::gaussian(std::move(terms));
    }
    if (variant == "rational") {
      std::vector<ScalarFunction::RationalTerm> terms;
      for (const auto& t : j.at("terms"))
        terms.push_back({pair_to_cx(t.at("coef")), pair_to_cx(t.at("pole")),
                         t.value("order", 1)});
      return ScalarFunction::rational(std::move(terms));
    }
    if (variant == "polynomial")
      return ScalarFunction::polynomial(j.at("coeffs").get<std::vector<double>>());
    fail(Errc::parse, "unknown function variant: " + variant);
  } catch (const json::exception& ex) {
    fail(Errc::parse, std::string("function json: ") + ex.what());
  }
}

ScalarFunction function_from_spec(const std::string& spec) {
  if (spec == "gaussian") return ScalarFunction::gaussian({{1.0, 1.0, 0.0, 0}});
  if (spec == "rational")
    return ScalarFunction::rational({{1.0, cx(0, 1), 1}, {1.0, cx(0, -1), 1}});
  if (spec == "polynomial") return ScalarFunction::polynomial({0, 0, 0, 1});
  if (!spec.empty() && spec[0] == '@') {
    json j;
    std::ifstream in(spec.substr(1));
    require(in.good(), Errc::io, "cannot open " + spec.substr(1));
    try {
      in >> j;
    } catch (const json::exception& ex) {
      fail(Errc::parse, spec.substr(1) + ": " + ex.what());
    }
    return function_from_json(j);
  }
  if (!spec.empty() && spec[0] == '{') {
    try {
      return function_from_json(json::parse(spec));
    } catch (const json::exception& ex) {
      fail(Errc::parse, std::string("inline function json: ") + ex.what());
    }
  }
  fail(Errc::parse, "unknown function spec: " + spec +
                        " (use gaussian | rational | polynomial | @file.json | inline json)");
}

json step_function_to_json(const StepFunction& xi) {
  return json{{"breakpoints", xi.breakpoints}, {"values", xi.values}};
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string json_fingerprint(const json& j) { return fnv1a_hex(j.dump()); }

CsvBuilder::CsvBuilder(std::vector<std::string> header) : columns_(header.size()) {
  row(header);
}

void CsvBuilder::row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, Errc::invalid_argument, "csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\r\n") != std::string::npos) {
      text_ += '"';
      for (char ch : c) {
        if (ch == '"') text_ += '"';
        text_ += ch;
      }
      text_ += '"';
    } else {
      text_ += c;
    }
  }
  text_ += "\r\n";
}

void CsvBuilder::row_values(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double v : cells) s.push_back(format_double(v));
  row(s);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), Errc::io, "cannot write " + path);
  out << text;
  require(out.good(), Errc::io, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace specshift
