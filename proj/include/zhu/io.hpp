/**
 * @file io.hpp
 *
 * JSON files: presentations, A_n-module files and report helpers.
 *
 * Rationals are written as strings "a/b" (plain "a" for integers), GF(p)
 * residues as integers. Readers accept either form in both fields.
 */
#ifndef ZHU_IO_HPP
#define ZHU_IO_HPP

#include "zhu/verma.hpp"

#include "json.hpp"

#include <string>

namespace zhu {

using Json = nlohmann::ordered_json;

/// Malformed input files; the message carries a line/column or a JSON path.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Field& f, const Json& j, const std::string& where);

Json state_to_json(const Voa& v, const State& s);
State state_from_json(const Voa& v, const Json& j, const std::string& where);

/// Throws DataError for quotient presentations, which the format cannot hold.
Json presentation_to_json(const Voa& v);
/// dmax_override > 0 replaces the file's cutoff.
Voa presentation_from_json(const Json& j, int dmax_override = 0);

/// "heisenberg" or "virasoro:<c>"; anything else is a DataError.
Voa builtin_voa(const std::string& name, const Field& f, int dmax = Voa::kDefaultDmax);

/// {"dim": d, "action": {label: [[row]...]}}; labels must name window
/// representatives.
AnModule module_from_json(const Json& j, const AnWindow& a);
Json module_to_json(const AnModule& u);

Json matrix_to_json(const Matrix& m);

/// Parses text, reporting syntax errors with line and column.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
/// Two-space indentation and a trailing newline.
std::string dump_json(const Json& j);

}  // namespace zhu

#endif  // ZHU_IO_HPP
