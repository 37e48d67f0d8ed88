#include "zhu/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace zhu {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

long long as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

// Monomials in files name generators by label; factors must already be in
// PBW order (k descending, then label).
Monomial monomial_from_json(const std::vector<std::string>& labels, const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of [label, k] pairs");
  Monomial m;
  std::vector<std::pair<long long, std::string>> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "/" + std::to_string(i);
    const Json& f = j[i];
    if (!f.is_array() || f.size() != 2) fail(at, "expected [label, k]");
    const std::string label = as_string(f[0], at + "/0");
    const long long k = as_int(f[1], at + "/1");
    if (k < 1) fail(at, "factor index k must be at least 1");
    auto pos = std::find(labels.begin(), labels.end(), label);
    if (pos == labels.end()) fail(at, "unknown generator '" + label + "'");
    if (!seen.empty()) {
      const auto& [pk, pl] = seen.back();
      if (k > pk || (k == pk && label < pl)) fail(at, "factors are not in PBW order (k descending, then label)");
    }
    seen.emplace_back(k, label);
    m.emplace_back(static_cast<int>(pos - labels.begin()), static_cast<int>(k));
  }
  return m;
}

State sparse_state_from_json(const Field& f, const std::vector<std::string>& labels, const Json& j,
                             const std::string& where) {
  if (!j.is_array()) fail(where, "expected a list of terms");
  State s(f);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "/" + std::to_string(i);
    const Monomial m = monomial_from_json(labels, member(j[i], "monomial", at), at + "/monomial");
    s.add(m, scalar_from_json(f, member(j[i], "coeff", at), at + "/coeff"));
  }
  return s;
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Json scalar_to_json(const Scalar& s) {
  if (s.field().is_rational()) return s.to_string();
  return s.residue();
}

Scalar scalar_from_json(const Field& f, const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return f.from_int(j.get<long long>());
    if (j.is_string()) return f.parse_scalar(j.get<std::string>());
  } catch (const FieldError& e) {
    fail(where, e.what());
  }
  fail(where, "expected a rational string or an integer");
}

Json state_to_json(const Voa& v, const State& s) {
  Json out = Json::array();
  for (const auto& [m, c] : s.terms()) {
    Json mono = Json::array();
    for (const auto& [g, k] : m) mono.push_back(Json::array({v.generators()[g].label, k}));
    out.push_back({{"monomial", mono}, {"coeff", scalar_to_json(c)}});
  }
  return out;
}

State state_from_json(const Voa& v, const Json& j, const std::string& where) {
  std::vector<std::string> labels;
  for (const auto& g : v.generators()) labels.push_back(g.label);
  return sparse_state_from_json(v.field(), labels, j, where);
}

Json presentation_to_json(const Voa& v) {
  if (v.is_quotient()) throw DataError("quotient presentations cannot be written as a presentation file");
  Json gens = Json::array();
  for (const auto& g : v.generators()) gens.push_back({{"label", g.label}, {"degree", g.degree}});
  Json products = Json::array();
  for (const auto& [key, value] : v.table()) {
    const auto& [l, k, r] = key;
    products.push_back({{"left", v.generators()[l].label},
                        {"k", k},
                        {"right", v.generators()[r].label},
                        {"value", state_to_json(v, value)}});
  }
  Json out;
  out["field"] = v.field().to_string();
  out["generators"] = gens;
  out["products"] = products;
  out["omega"] = state_to_json(v, v.omega());
  out["central_charge"] = v.central_charge().to_string();
  out["dmax"] = v.dmax();
  return out;
}

Voa presentation_from_json(const Json& j, int dmax_override) {
  Field f;
  try {
    f = Field::parse(as_string(member(j, "field", "/"), "/field"));
  } catch (const FieldError& e) {
    fail("/field", e.what());
  }
  const Json& gj = member(j, "generators", "/");
  if (!gj.is_array()) fail("/generators", "expected a list");
  std::vector<Generator> gens;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < gj.size(); ++i) {
    const std::string at = "/generators/" + std::to_string(i);
    Generator g;
    g.label = as_string(member(gj[i], "label", at), at + "/label");
    if (g.label.empty() || g.label.find_first_of("()|*[] ") != std::string::npos)
      fail(at + "/label", "labels must be nonempty and avoid ()|*[] and spaces");
    g.degree = static_cast<int>(as_int(member(gj[i], "degree", at), at + "/degree"));
    labels.push_back(g.label);
    gens.push_back(g);
  }
  auto index = [&](const Json& x, const std::string& at) {
    const std::string l = as_string(x, at);
    auto pos = std::find(labels.begin(), labels.end(), l);
    if (pos == labels.end()) fail(at, "unknown generator '" + l + "'");
    return static_cast<int>(pos - labels.begin());
  };
  ProductTable table;
  const Json& pj = member(j, "products", "/");
  if (!pj.is_array()) fail("/products", "expected a list");
  for (std::size_t i = 0; i < pj.size(); ++i) {
    const std::string at = "/products/" + std::to_string(i);
    const int l = index(member(pj[i], "left", at), at + "/left");
    const int r = index(member(pj[i], "right", at), at + "/right");
    const long long k = as_int(member(pj[i], "k", at), at + "/k");
    if (k < 0) fail(at + "/k", "k must be nonnegative");
    State value = sparse_state_from_json(f, labels, member(pj[i], "value", at), at + "/value");
    if (!table.emplace(std::make_tuple(l, static_cast<int>(k), r), std::move(value)).second)
      fail(at, "duplicate product entry");
  }
  State omega = sparse_state_from_json(f, labels, member(j, "omega", "/"), "/omega");
  Scalar c = scalar_from_json(f, member(j, "central_charge", "/"), "/central_charge");
  int dmax = static_cast<int>(as_int(member(j, "dmax", "/"), "/dmax"));
  if (dmax_override > 0) dmax = dmax_override;
  try {
    return Voa(f, std::move(gens), std::move(table), std::move(omega), std::move(c), dmax);
  } catch (const DataError& e) {
    throw InputError(std::string("presentation: ") + e.what());
  }
}

Voa builtin_voa(const std::string& name, const Field& f, int dmax) {
  if (name == "heisenberg") return build_heisenberg(f, dmax);
  if (name.rfind("virasoro:", 0) == 0) {
    try {
      return build_virasoro(f, f.parse_scalar(name.substr(9)), dmax);
    } catch (const FieldError& e) {
      throw DataError("bad central charge in '" + name + "': " + e.what());
    }
  }
  throw DataError("unknown built-in '" + name + "' (expected heisenberg or virasoro:<c>)");
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

AnModule module_from_json(const Json& j, const AnWindow& a) {
  const Field& f = a.voa().field();
  const long long dim = as_int(member(j, "dim", "/"), "/dim");
  if (dim < 1) fail("/dim", "dimension must be positive");
  AnModule u{f, static_cast<std::size_t>(dim), {}};
  const Json& act = member(j, "action", "/");
  if (!act.is_object()) fail("/action", "expected an object keyed by class label");
  for (const auto& [label, mj] : act.items()) {
    const std::string at = "/action/" + label;
    bool known = false;
    for (std::size_t i = 0; i < a.dim(); ++i) known = known || a.rep_label(i) == label;
    if (!known) fail(at, "'" + label + "' is not a class representative of the window");
    if (!mj.is_array() || mj.size() != u.dim) fail(at, "expected " + std::to_string(dim) + " rows");
    Matrix m(f, u.dim, u.dim);
    for (std::size_t r = 0; r < u.dim; ++r) {
      if (!mj[r].is_array() || mj[r].size() != u.dim)
        fail(at + "/" + std::to_string(r), "expected " + std::to_string(dim) + " entries");
      for (std::size_t c = 0; c < u.dim; ++c)
        m(r, c) = scalar_from_json(f, mj[r][c], at + "/" + std::to_string(r) + "/" + std::to_string(c));
    }
    u.action.emplace(label, std::move(m));
  }
  return u;
}

Json module_to_json(const AnModule& u) {
  Json act = Json::object();
  for (const auto& [label, m] : u.action) act[label] = matrix_to_json(m);
  return {{"dim", u.dim}, {"action", act}};
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": " + line_col(text, e.byte ? e.byte - 1 : 0) + ": malformed JSON");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace zhu
