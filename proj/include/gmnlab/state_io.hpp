// Copyright 2026 The gmnlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// State files and locale-independent number formatting.
//
// State file (UTF-8 JSON), either a density matrix
//   {"dim": 8, "re": [[...8 numbers...] x8], "im": [[...] x8]}
// or a pure state
//   {"amps_re": [...8 numbers...], "amps_im": [...8 numbers...]}
// "im" / "amps_im" may be omitted for real data.

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <variant>

#include <json.hpp>

#include "gmnlab/error.hpp"
#include "gmnlab/matcore.hpp"
#include "gmnlab/states.hpp"

namespace gmnlab {

/// Nine significant digits, '.' decimal point regardless of locale.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

using LoadedState = std::variant<DensityMatrix, PureState>;

namespace detail {

inline double number_at(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, "field '" + field + "' is not a number");
  return j.get<double>();
}

inline RealMatrix read_square(const nlohmann::json& doc, const std::string& field, int dim) {
  RealMatrix out = RealMatrix::Zero(dim, dim);
  if (!doc.contains(field)) return out;
  const auto& rows = doc.at(field);
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    throw Error(ErrorCode::ParseError,
                "field '" + field + "' must be an array of " + std::to_string(dim) + " rows");
  }
  for (int i = 0; i < dim; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw Error(ErrorCode::ParseError, "field '" + field + "' row " + std::to_string(i) +
                                             " must have " + std::to_string(dim) + " entries");
    }
    for (int j = 0; j < dim; ++j) {
      out(i, j) = number_at(row[j], field + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return out;
}

inline RealVector read_vector(const nlohmann::json& doc, const std::string& field, int len) {
  RealVector out = RealVector::Zero(len);
  if (!doc.contains(field)) return out;
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, "field '" + field + "' is not an array");
  if (static_cast<int>(arr.size()) != len) {
    throw Error(ErrorCode::BadDim, "field '" + field + "' has " + std::to_string(arr.size()) +
                                       " amplitudes, expected " + std::to_string(len));
  }
  for (int i = 0; i < len; ++i) {
    out(i) = number_at(arr[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

}  // namespace detail

/// Parses state-file text. Density matrices are validated; pure states must
/// be normalized.
inline LoadedState parse_state(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");

  if (doc.contains("amps_re")) {
    const RealVector re = detail::read_vector(doc, "amps_re", kDim);
    const RealVector im = detail::read_vector(doc, "amps_im", kDim);
    PureState psi;
    for (int i = 0; i < kDim; ++i) psi.amplitudes[i] = Complex(re(i), im(i));
    if (std::abs(psi.norm() - 1.0) > kNormTol) {
      throw Error(ErrorCode::NotNormalized, "state norm = " + std::to_string(psi.norm()));
    }
    return psi;
  }

  if (!doc.contains("dim")) throw Error(ErrorCode::ParseError, "missing field 'dim'");
  if (!doc.at("dim").is_number_integer()) {
    throw Error(ErrorCode::ParseError, "field 'dim' must be an integer");
  }
  const int dim = doc.at("dim").get<int>();
  if (dim != kDim) {
    throw Error(ErrorCode::BadDim, "dim = " + std::to_string(dim) + ", expected 8");
  }
  if (!doc.contains("re")) throw Error(ErrorCode::ParseError, "missing field 're'");
  ComplexMatrix m(dim, dim);
  m.real() = detail::read_square(doc, "re", dim);
  m.imag() = detail::read_square(doc, "im", dim);
  return validate_density(m);
}

inline LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str());
}

inline DensityMatrix as_density(const LoadedState& s) {
  if (const auto* rho = std::get_if<DensityMatrix>(&s)) return *rho;
  return pure_to_density(std::get<PureState>(s));
}

inline nlohmann::json density_to_json(const ComplexMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ir = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace gmnlab
