#include "shimura/core/json_io.hpp"

namespace shimura {

Json encode(const Rational &q) { return to_string(q); }
Json encode(const GaussianRational &z) { return to_string(z); }
Json encode(const Integer &z) { return z.get_str(); }

namespace {

template <class M> Json encode_matrix(const M &m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string scalar_text(const Json &j, const std::string &path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw input_error(path + ": expected a scalar string");
}

template <class T, class F> Matrix<T> decode_matrix(const Json &j, const std::string &path, F &&scalar) {
  if (!j.is_array() || j.empty()) throw input_error(path + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw input_error(path + "/0: expected a non-empty row");
  const std::size_t cols = j[0].size();
  Matrix<T> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto rp = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != cols) throw input_error(rp + ": ragged row");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = scalar(j[i][c], rp + "/" + std::to_string(c));
  }
  return m;
}

} // namespace

Json encode(const QMatrix &m) { return encode_matrix(m); }
Json encode(const CMatrix &m) { return encode_matrix(m); }
Json encode(const IntMatrix &m) { return encode_matrix(m); }

Rational decode_rational(const Json &j, const std::string &path) {
  try {
    return parse_rational(scalar_text(j, path));
  } catch (const Error &e) {
    throw input_error(path + ": " + e.what());
  }
}

GaussianRational decode_gaussian(const Json &j, const std::string &path) {
  try {
    return parse_gaussian(scalar_text(j, path));
  } catch (const Error &e) {
    throw input_error(path + ": " + e.what());
  }
}

Integer decode_integer(const Json &j, const std::string &path) {
  Rational q = decode_rational(j, path);
  if (!is_integer(q)) throw input_error(path + ": expected an integer");
  return q.get_num();
}

QMatrix decode_qmatrix(const Json &j, const std::string &path) {
  return decode_matrix<Rational>(j, path, decode_rational);
}
CMatrix decode_cmatrix(const Json &j, const std::string &path) {
  return decode_matrix<GaussianRational>(j, path, decode_gaussian);
}
IntMatrix decode_imatrix(const Json &j, const std::string &path) {
  return decode_matrix<Integer>(j, path, decode_integer);
}

const Json &require(const Json &obj, const std::string &key, const std::string &path) {
  if (!obj.is_object()) throw input_error(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw input_error(path + "/" + key + ": missing");
  return *it;
}

} // namespace shimura
