#pragma once

#include "shimura/core/matrix.hpp"

#include <json.hpp>

#include <string>

namespace shimura {

using Json = nlohmann::json;

// Scalars travel as canonical strings ("a/b", "a/b+c/d*i"); matrices as
// arrays of row arrays. Integer-valued scalars may also be given as JSON
// numbers on input. Decoders throw input_error naming the offending path.

Json encode(const Rational &q);
Json encode(const GaussianRational &z);
Json encode(const Integer &z);
Json encode(const QMatrix &m);
Json encode(const CMatrix &m);
Json encode(const IntMatrix &m);

Rational decode_rational(const Json &j, const std::string &path);
GaussianRational decode_gaussian(const Json &j, const std::string &path);
Integer decode_integer(const Json &j, const std::string &path);
QMatrix decode_qmatrix(const Json &j, const std::string &path);
CMatrix decode_cmatrix(const Json &j, const std::string &path);
IntMatrix decode_imatrix(const Json &j, const std::string &path);

/// Fetches a required member of an object, or throws input_error.
const Json &require(const Json &obj, const std::string &key, const std::string &path);

} // namespace shimura
