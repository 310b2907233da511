#include "qdivlab/state_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qdivlab/errors.hpp"

namespace qdivlab {

namespace {

using nlohmann::json;

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::UnsupportedFormat, std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) fail(ErrorCode::UnsupportedFormat, std::string(what) + " must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Matrix real_block(const json& j, std::size_t dim, const char* what) {
  if (!j.is_array() || j.size() != dim) {
    fail(ErrorCode::UnsupportedFormat, std::string(what) + " must have " + std::to_string(dim) + " rows");
  }
  Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    const auto row = number_list(j[i], what);
    if (row.size() != dim) {
      fail(ErrorCode::UnsupportedFormat, std::string(what) + " row " + std::to_string(i) + " has wrong length");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
    }
  }
  return m;
}

}  // namespace

DensityMatrix parse_state_json(const std::string& text, const Tolerances& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::UnsupportedFormat, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::UnsupportedFormat, "state file must be a JSON object");

  if (j.contains("bloch")) {
    const auto a = number_list(j["bloch"], "bloch");
    if (a.size() != 3) fail(ErrorCode::UnsupportedFormat, "bloch must have 3 components");
    return from_bloch(Eigen::Vector3d(a[0], a[1], a[2]), tol);
  }
  if (j.contains("diag")) return from_distribution(number_list(j["diag"], "diag"), tol);
  if (j.contains("dim") && j.contains("re")) {
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) {
      fail(ErrorCode::UnsupportedFormat, "dim must be a positive integer");
    }
    const auto dim = static_cast<std::size_t>(j["dim"].get<long long>());
    if (dim > tol.dimension_cap) fail(ErrorCode::DimensionOverflow, "dim exceeds cap");
    Matrix m = real_block(j["re"], dim, "re");
    if (j.contains("im")) m += Complex(0.0, 1.0) * real_block(j["im"], dim, "im");
    return make_density(m, tol);
  }
  fail(ErrorCode::UnsupportedFormat, "expected one of {dim,re,im}, {bloch}, {diag}");
}

DensityMatrix read_state_file(const std::string& path, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::UnsupportedFormat, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str(), tol);
}

std::string state_to_json(const DensityMatrix& rho) {
  const auto n = static_cast<std::size_t>(rho.dim());
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json rr = json::array(), ri = json::array();
    for (std::size_t k = 0; k < n; ++k) {
      const Complex z = rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      rr.push_back(z.real());
      ri.push_back(z.imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return json{{"dim", n}, {"re", re}, {"im", im}}.dump();
}

}  // namespace qdivlab
