#include "cli.hpp"

#include "shimura/abvar.hpp"
#include "shimura/core/json_io.hpp"
#include "shimura/finsymp.hpp"
#include "shimura/hodge.hpp"
#include "shimura/pel.hpp"
#include "shimura/siegel.hpp"
#include "shimura/trace.hpp"
#include "shimura/unitary.hpp"
#include "shimura/zeta.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace shimura::cli {

namespace {

// ---- decoding helpers ------------------------------------------------------

std::string at(const std::string &path, const std::string &key) { return path + "/" + key; }

std::int64_t decode_int(const Json &j, const std::string &path) {
  Integer z = decode_integer(j, path);
  if (!z.fits_slong_p()) throw input_error(path + ": integer out of range");
  return z.get_si();
}

std::size_t decode_size(const Json &j, const std::string &path) {
  std::int64_t v = decode_int(j, path);
  if (v < 0) throw input_error(path + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::int64_t int_field(const Json &obj, const std::string &key, const std::string &path) {
  return decode_int(require(obj, key, path), at(path, key));
}

std::size_t size_field(const Json &obj, const std::string &key, const std::string &path) {
  return decode_size(require(obj, key, path), at(path, key));
}

const Json &array_field(const Json &obj, const std::string &key, const std::string &path) {
  const Json &j = require(obj, key, path);
  if (!j.is_array()) throw input_error(at(path, key) + ": expected an array");
  return j;
}

template <class T, class F> std::vector<T> decode_list(const Json &j, const std::string &path, F &&item) {
  if (!j.is_array()) throw input_error(path + ": expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(item(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<Integer> integer_list(const Json &j, const std::string &path) {
  return decode_list<Integer>(j, path, decode_integer);
}

std::vector<Rational> rational_list(const Json &j, const std::string &path) {
  return decode_list<Rational>(j, path, decode_rational);
}

bool bool_field(const Json &obj, const std::string &key, const std::string &path, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw input_error(at(path, key) + ": expected a boolean");
  return obj[key].get<bool>();
}

std::string string_field(const Json &obj, const std::string &key, const std::string &path) {
  const Json &j = require(obj, key, path);
  if (!j.is_string()) throw input_error(at(path, key) + ": expected a string");
  return j.get<std::string>();
}

template <class T> Json encode_list(const std::vector<T> &xs) {
  Json out = Json::array();
  for (const auto &x : xs) out.push_back(encode(x));
  return out;
}

Json encode_u64(std::uint64_t v) { return encode(Integer(std::to_string(v))); }

// ---- shared domain decoders ------------------------------------------------

siegel::SiegelPoint decode_point(const Json &obj, const std::string &key, const std::string &path) {
  return siegel::SiegelPoint(decode_cmatrix(require(obj, key, path), at(path, key)));
}

siegel::SymplecticSimilitude decode_similitude(const Json &obj, const std::string &key, const std::string &path) {
  return siegel::SymplecticSimilitude(decode_qmatrix(require(obj, key, path), at(path, key)));
}

Json encode_torus(const abvar::PolarizedTorusData &t) {
  return {{"lattice", encode(t.lattice())},
          {"j", encode(t.j())},
          {"form_scale", encode(t.form_scale())},
          {"pairing", encode(t.pairing())},
          {"principal", t.is_principal()}};
}

abvar::PolarizedTorusData decode_torus(const Json &j, const std::string &path) {
  return abvar::PolarizedTorusData(decode_qmatrix(require(j, "lattice", path), at(path, "lattice")),
                                   decode_qmatrix(require(j, "j", path), at(path, "j")),
                                   decode_rational(require(j, "form_scale", path), at(path, "form_scale")));
}

Json encode_level(const abvar::LevelStructure &s) {
  return {{"n", s.n}, {"eta", encode(s.eta)}, {"u", s.u}};
}

abvar::LevelStructure decode_level(const Json &j, const std::string &path) {
  return abvar::LevelStructure(int_field(j, "n", path), decode_imatrix(require(j, "eta", path), at(path, "eta")),
                               int_field(j, "u", path));
}

// Torus given explicitly, or the one attached to a period point.
abvar::PolarizedTorusData torus_input(const Json &doc, std::int64_t n) {
  if (doc.contains("torus")) return decode_torus(doc["torus"], "/torus");
  return abvar::torus_from_point(decode_point(doc, "y", ""), n).torus;
}

Json encode_key(const finsymp::DoubleCosetKey &k) { return {{"m", k.m}, {"a", k.a}}; }

finsymp::DoubleCosetKey decode_key(const Json &j, std::size_t d, const std::string &path) {
  finsymp::DoubleCosetKey key;
  key.d = d;
  key.m = static_cast<int>(int_field(j, "m", path));
  const Json &a = array_field(j, "a", path);
  for (std::size_t i = 0; i < a.size(); ++i)
    key.a.push_back(static_cast<int>(decode_int(a[i], at(path, "a") + "/" + std::to_string(i))));
  if (key.a.size() != d) throw input_error(at(path, "a") + ": expected d exponents");
  return key;
}

// "T" is diag(1, p) per block, "central" is p times the identity, and
// "m:a1,...,ad" names the class directly.
finsymp::DoubleCosetKey parse_type(const std::string &type, std::size_t d) {
  finsymp::DoubleCosetKey key;
  key.d = d;
  if (type == "T") {
    key.m = 1;
    key.a.assign(d, 0);
    return key;
  }
  if (type == "central") {
    key.m = 2;
    key.a.assign(d, 1);
    return key;
  }
  auto colon = type.find(':');
  if (colon == std::string::npos) throw input_error("--type: expected T, central or m:a1,...,ad");
  try {
    key.m = std::stoi(type.substr(0, colon));
    std::stringstream rest(type.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) key.a.push_back(std::stoi(item));
  } catch (const std::logic_error &) {
    throw input_error("--type: malformed class " + type);
  }
  if (key.a.size() != d) throw input_error("--type: expected d exponents");
  return key;
}

Json encode_hecke(const finsymp::HeckeElement &h) {
  Json terms = Json::array();
  for (const auto &[key, coeff] : h.terms) {
    Json t = encode_key(key);
    t["coeff"] = encode(coeff);
    terms.push_back(std::move(t));
  }
  return {{"d", h.d}, {"p", h.p}, {"n", h.n}, {"terms", terms}};
}

finsymp::HeckeElement decode_hecke(const Json &j, std::size_t d, std::int64_t p, std::int64_t n,
                                   const std::string &path) {
  finsymp::HeckeElement h{d, p, n, {}};
  if (!j.is_array()) throw input_error(path + ": expected an array of terms");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto tp = path + "/" + std::to_string(i);
    Integer c = decode_integer(require(j[i], "coeff", tp), at(tp, "coeff"));
    if (c != 0) h.terms[decode_key(j[i], d, tp)] += c;
  }
  return h;
}

unitary::LocalInnerFormDatum decode_place(const Json &j, const std::string &path) {
  unitary::LocalInnerFormDatum v;
  const std::string kind = string_field(j, "kind", path);
  if (kind == "real") {
    v.kind = unitary::PlaceKind::Real;
    v.p = size_field(j, "p", path);
    v.q = size_field(j, "q", path);
  } else if (kind == "nonsplit") {
    v.kind = unitary::PlaceKind::FiniteNonsplit;
    v.quasi_split = bool_field(j, "quasi_split", path, true);
  } else if (kind == "split") {
    v.kind = unitary::PlaceKind::FiniteSplit;
    v.m = size_field(j, "m", path);
  } else {
    throw input_error(at(path, "kind") + ": expected real, nonsplit or split");
  }
  return v;
}

Json encode_coords(const unitary::SignVector &v) { return v.coordinates(); }

pel::PELDatum decode_datum(const Json &doc) {
  const Json &j = doc.contains("datum") ? doc["datum"] : doc;
  const std::string path = doc.contains("datum") ? "/datum" : "";
  if (j.contains("example")) {
    const std::string name = string_field(j, "example", path);
    if (name == "siegel") return pel::siegel_datum(size_field(j, "d", path));
    if (name == "unitary") return pel::unitary_datum(size_field(j, "p", path), size_field(j, "q", path));
    if (name == "quaternion") return pel::quaternion_datum(size_field(j, "n", path));
    throw input_error(at(path, "example") + ": expected siegel, unitary or quaternion");
  }
  pel::PELDatum d;
  const Json &alg = require(j, "algebra", path);
  const auto ap = at(path, "algebra");
  d.algebra.rank = size_field(alg, "rank", ap);
  const Json &mult = array_field(alg, "mult", ap);
  const std::size_t r = d.algebra.rank;
  if (mult.size() != r) throw input_error(at(ap, "mult") + ": expected rank slices");
  d.algebra.mult.assign(r, std::vector<std::vector<Integer>>(r));
  for (std::size_t a = 0; a < r; ++a) {
    const auto sp = at(ap, "mult") + "/" + std::to_string(a);
    if (!mult[a].is_array() || mult[a].size() != r) throw input_error(sp + ": expected rank rows");
    for (std::size_t b = 0; b < r; ++b) {
      d.algebra.mult[a][b] = integer_list(mult[a][b], sp + "/" + std::to_string(b));
      if (d.algebra.mult[a][b].size() != r) throw input_error(sp + "/" + std::to_string(b) + ": expected rank entries");
    }
  }
  d.algebra.involution = decode_imatrix(require(alg, "involution", ap), at(ap, "involution"));
  d.actions = decode_list<IntMatrix>(array_field(j, "actions", path), at(path, "actions"), decode_imatrix);
  d.pairing = decode_imatrix(require(j, "pairing", path), at(path, "pairing"));
  d.h1 = decode_qmatrix(require(j, "h1", path), at(path, "h1"));
  d.hi = decode_qmatrix(require(j, "hi", path), at(path, "hi"));
  d.type_d = bool_field(j, "type_d", path, false);
  try {
    d.check_shapes();
  } catch (const Error &e) {
    throw input_error(path + ": " + e.what());
  }
  return d;
}

zeta::VarietySpec decode_variety(const Json &doc) {
  const Json &j = doc.contains("variety") ? doc["variety"] : doc;
  const std::string path = doc.contains("variety") ? "/variety" : "";
  zeta::VarietySpec v;
  const std::string ambient = string_field(j, "ambient", path);
  if (ambient == "affine")
    v.ambient = zeta::Ambient::Affine;
  else if (ambient == "projective")
    v.ambient = zeta::Ambient::Projective;
  else
    throw input_error(at(path, "ambient") + ": expected affine or projective");
  v.dim = size_field(j, "dim", path);
  v.p = int_field(j, "p", path);
  v.k = j.contains("k") ? static_cast<unsigned>(size_field(j, "k", path)) : 1;
  const Json &eqs = array_field(j, "equations", path);
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    const auto ep = at(path, "equations") + "/" + std::to_string(e);
    if (!eqs[e].is_object()) throw input_error(ep + ": expected an exponent-keyed object");
    zeta::Polynomial f;
    for (const auto &[key, coeff] : eqs[e].items()) {
      zeta::Term t;
      t.coeff = decode_int(coeff, ep + "/" + key);
      std::stringstream ss(key);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
          throw input_error(ep + "/" + key + ": exponent keys are comma-separated non-negative integers");
        t.exponents.push_back(static_cast<unsigned>(std::stoul(item)));
      }
      f.push_back(std::move(t));
    }
    v.equations.push_back(std::move(f));
  }
  try {
    v.validate();
  } catch (const Error &e) {
    if (e.kind() == Error::Kind::Resource) throw;
    throw input_error(path + ": " + e.what());
  }
  return v;
}

std::vector<std::uint32_t> element_list(const Json &j, const std::string &path) {
  return decode_list<std::uint32_t>(j, path, [](const Json &x, const std::string &p) {
    std::size_t v = decode_size(x, p);
    if (v > UINT32_MAX) throw input_error(p + ": element index out of range");
    return static_cast<std::uint32_t>(v);
  });
}

trace::FiniteGroupTable decode_group(const Json &j, const std::string &path) {
  if (j.is_string()) return trace::catalog_group(j.get<std::string>());
  if (j.contains("catalog")) return trace::catalog_group(string_field(j, "catalog", path));
  const Json &rows = array_field(j, "table", path);
  std::vector<std::vector<std::uint32_t>> table;
  for (std::size_t i = 0; i < rows.size(); ++i) table.push_back(element_list(rows[i], at(path, "table") + "/" + std::to_string(i)));
  std::vector<std::uint32_t> gamma = j.contains("gamma") ? element_list(j["gamma"], at(path, "gamma")) : std::vector<std::uint32_t>{0};
  std::vector<std::string> labels;
  if (j.contains("labels"))
    labels = decode_list<std::string>(j["labels"], at(path, "labels"), [](const Json &x, const std::string &p) {
      if (!x.is_string()) throw input_error(p + ": expected a string");
      return x.get<std::string>();
    });
  try {
    return trace::FiniteGroupTable(std::move(table), std::move(gamma), std::move(labels));
  } catch (const Error &e) {
    throw input_error(path + ": " + e.what());
  }
}

Json parse_json_text(const std::string &text, const std::string &what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw input_error(what + ": " + e.what());
  }
}

// ---- dispatcher --------------------------------------------------------------

struct Options {
  std::string input_path;
  std::uint64_t budget = 0;
  CLI::Option *budget_opt = nullptr;

  std::string variant = "classical";
  std::string group, params, type, subgroup, f;
  std::size_t d = 1, p = 0, q = 0, n = 0;
  std::int64_t prime = 2;
  bool enumerate = false, members = false;
};

class Runner {
public:
  Runner(std::istream &in) : in_(in) {}

  Options opt;
  std::map<const CLI::App *, std::function<Json()>> handlers;

  const Json &input() {
    if (!loaded_) {
      std::string text;
      if (!opt.input_path.empty()) {
        std::ifstream file(opt.input_path);
        if (!file) throw input_error("cannot open input file " + opt.input_path);
        text.assign(std::istreambuf_iterator<char>(file), {});
      } else {
        text.assign(std::istreambuf_iterator<char>(in_), {});
      }
      doc_ = parse_json_text(text, "input");
      loaded_ = true;
    }
    return doc_;
  }

  template <class T> T budget_or(T fallback) const {
    return opt.budget_opt->count() ? static_cast<T>(opt.budget) : fallback;
  }

private:
  std::istream &in_;
  Json doc_;
  bool loaded_ = false;
};

void register_siegel(CLI::App &app, Runner &r) {
  auto *grp = app.add_subcommand("siegel", "Siegel space: action, bounded realization, metric");
  grp->require_subcommand(1);

  auto *act = grp->add_subcommand("act", "Mobius action of {g} on {y}");
  r.handlers[act] = [&r] {
    const Json &doc = r.input();
    auto g = decode_similitude(doc, "g", "");
    auto y = decode_point(doc, "y", "");
    auto out = siegel::mobius_act(g, y);
    return Json{{"y", encode(out.matrix())},
                {"component", out.component() == siegel::Component::Upper ? "upper" : "lower"},
                {"multiplier", encode(g.multiplier())}};
  };

  auto *cay = grp->add_subcommand("cayley", "Cayley transform of {y}, or the inverse of {a}");
  r.handlers[cay] = [&r] {
    const Json &doc = r.input();
    if (doc.contains("a")) {
      siegel::BoundedPoint a(decode_cmatrix(doc["a"], "/a"));
      return Json{{"y", encode(siegel::cayley_inv(a).matrix())}};
    }
    return Json{{"a", encode(siegel::cayley(decode_point(doc, "y", "")).matrix())}};
  };

  auto *met = grp->add_subcommand("metric", "Metric value at {y, dy}; residual under {g} if given");
  met->add_option("--variant", r.opt.variant, "paper or classical")->check(CLI::IsMember({"paper", "classical"}));
  r.handlers[met] = [&r] {
    const Json &doc = r.input();
    auto y = decode_point(doc, "y", "");
    CMatrix dy = decode_cmatrix(require(doc, "dy", ""), "/dy");
    auto v = r.opt.variant == "paper" ? siegel::MetricVariant::Paper : siegel::MetricVariant::Classical;
    auto tr = siegel::metric_trace(y, dy, v);
    Json out{{"variant", r.opt.variant}, {"value", encode(tr.re)}, {"trace", encode(tr)}};
    if (doc.contains("g")) {
      double res = siegel::invariance_residual(decode_similitude(doc, "g", ""), y, dy, v);
      out["residual"] = res;
      out["invariant"] = res < 1e-9;
    }
    return out;
  };
}

void register_hodge(CLI::App &app, Runner &r) {
  auto *grp = app.add_subcommand("hodge", "Complex structures, Lagrangians, Shimura data");
  grp->require_subcommand(1);

  auto *jm = grp->add_subcommand("jmatrix", "Complex structure attached to {y}");
  r.handlers[jm] = [&r] {
    auto j = hodge::jmatrix_from_point(decode_point(r.input(), "y", ""));
    return Json{{"j", encode(j.matrix())}, {"positivity_gram", encode(j.positivity_gram())}};
  };

  auto *lag = grp->add_subcommand("lagrangian", "Lagrangian frame of {y}, or the point of {frame}");
  r.handlers[lag] = [&r] {
    const Json &doc = r.input();
    if (doc.contains("frame")) {
      hodge::LagrangianFrame b(decode_cmatrix(doc["frame"], "/frame"));
      return Json{{"y", encode(hodge::point_from_lagrangian(b).matrix())}};
    }
    auto b = hodge::lagrangian_from_point(decode_point(doc, "y", ""));
    return Json{{"frame", encode(b.matrix())},
                {"isotropy", encode(hodge::isotropy_matrix(b.matrix()))},
                {"positivity", encode(hodge::positivity_matrix(b.matrix()))}};
  };

  auto *chk = grp->add_subcommand("check-datum", "Axioms (a)-(c) for the standard h, or for --input samples");
  chk->add_option("--group", r.opt.group, "gsp or gu")->required()->check(CLI::IsMember({"gsp", "gu"}));
  chk->add_option("--params", r.opt.params, "d for gsp, p,q for gu")->required();
  r.handlers[chk] = [&r] {
    std::vector<std::size_t> params;
    std::stringstream ss(r.opt.params);
    for (std::string item; std::getline(ss, item, ',');) params.push_back(decode_size(Json(item), "--params"));
    hodge::GroupTag tag;
    if (r.opt.group == "gsp") {
      if (params.size() != 1) throw input_error("--params: gsp takes d");
      tag = hodge::GroupTag::gsp(params[0]);
    } else {
      if (params.size() != 2) throw input_error("--params: gu takes p,q");
      tag = hodge::GroupTag::gu(params[0], params[1]);
    }
    auto spec = [&] {
      if (r.opt.input_path.empty())
        return tag.kind == hodge::GroupKind::GSp ? hodge::ShimuraDatumSpec::standard_gsp(tag.d)
                                                 : hodge::ShimuraDatumSpec::standard_gu(tag.p, tag.q);
      const Json &samples = array_field(r.input(), "samples", "");
      std::vector<hodge::Sample> xs;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto sp = "/samples/" + std::to_string(i);
        xs.push_back({decode_gaussian(require(samples[i], "z", sp), sp + "/z"),
                      decode_cmatrix(require(samples[i], "h", sp), sp + "/h")});
      }
      return hodge::ShimuraDatumSpec(tag, std::move(xs));
    }();
    auto rep = hodge::check_shimura_conditions(spec);
    return Json{{"weight_central", rep.weight_central},
                {"hodge_types", rep.hodge_types},
                {"cartan", rep.cartan},
                {"lie_dimension", rep.lie_dimension},
                {"hodge_dimensions", {{"-1,1", rep.dim_minus_one_one}, {"0,0", rep.dim_zero_zero}, {"1,-1", rep.dim_one_minus_one}}},
                {"satisfied", rep.weight_central && rep.hodge_types && rep.cartan}};
  };
}

void register_abvar(CLI::App &app, Runner &r) {
  auto *grp = app.add_subcommand("abvar", "Polarized tori, level structures, Hecke operators");
  grp->require_subcommand(1);

  auto *fp = grp->add_subcommand("from-point", "Levelled torus of {y, n}");
  r.handlers[fp] = [&r] {
    const Json &doc = r.input();
    std::int64_t n = doc.contains("n") ? int_field(doc, "n", "") : 1;
    auto x = abvar::torus_from_point(decode_point(doc, "y", ""), n);
    return Json{{"torus", encode_torus(x.torus)}, {"level", encode_level(x.level)}};
  };

  auto *weil = grp->add_subcommand("weil", "Weil pairing exponent of {a, b} on the n-torsion");
  r.handlers[weil] = [&r] {
    const Json &doc = r.input();
    std::int64_t n = int_field(doc, "n", "");
    auto t = torus_input(doc, n);
    auto a = integer_list(require(doc, "a", ""), "/a");
    auto b = integer_list(require(doc, "b", ""), "/b");
    return Json{{"n", n}, {"exponent", abvar::weil_pairing_exp(t, n, a, b)}};
  };

  auto *lvl = grp->add_subcommand("check-level", "Is {level} a level structure on {torus}");
  r.handlers[lvl] = [&r] {
    const Json &doc = r.input();
    auto s = decode_level(require(doc, "level", ""), "/level");
    auto t = torus_input(doc, s.n);
    return Json{{"valid", abvar::is_level_structure(t, s)}};
  };

  auto *hk = grp->add_subcommand("hecke", "Image of {torus, level} under T_g");
  r.handlers[hk] = [&r] {
    const Json &doc = r.input();
    auto s = decode_level(require(doc, "level", ""), "/level");
    abvar::LevelledTorus x{torus_input(doc, s.n), s};
    abvar::IntegralHeckeElement g(decode_imatrix(require(doc, "g", ""), "/g"), s.n);
    auto y = abvar::hecke_Tg(x, g);
    return Json{{"torus", encode_torus(y.torus)}, {"level", encode_level(y.level)}};
  };

  auto *red = grp->add_subcommand("reduce", "SL2(Z) reduction of {tau}");
  r.handlers[red] = [&r] {
    const Json &doc = r.input();
    CMatrix tau(1, 1);
    tau(0, 0) = decode_gaussian(require(doc, "tau", ""), "/tau");
    auto rd = abvar::reduce_sl2z(siegel::SiegelPoint(tau));
    return Json{{"tau", encode(rd.tau.matrix()(0, 0))}, {"gamma", encode(rd.gamma.matrix())}};
  };
}

void register_finsymp(CLI::App &app, Runner &r) {
  auto *grp = app.add_subcommand("finsymp", "Finite symplectic groups and Hecke double cosets");
  grp->require_subcommand(1);

  auto *ord = grp->add_subcommand("order", "|Sp_2d(Z/n)| from the formula, optionally enumerated");
  ord->add_option("--d", r.opt.d)->required()->check(CLI::PositiveNumber);
  ord->add_option("--n", r.opt.n)->required()->check(CLI::PositiveNumber);
  ord->add_flag("--enumerate", r.opt.enumerate, "also count by enumeration");
  r.handlers[ord] = [&r] {
    auto n = static_cast<std::int64_t>(r.opt.n);
    Json out{{"d", r.opt.d}, {"n", n}, {"order", encode(finsymp::sp_order(r.opt.d, n))}};
    if (r.opt.enumerate) {
      auto e = finsymp::enumerate_sp(r.opt.d, n, Exec::Parallel, r.budget_or(finsymp::default_budget));
      out["enumerated"] = encode_u64(e.size());
    }
    return out;
  };

  auto *lift = grp->add_subcommand("lift", "Integral symplectic lift of {g} mod {n}");
  r.handlers[lift] = [&r] {
    const Json &doc = r.input();
    auto g = finsymp::validate(decode_imatrix(require(doc, "g", ""), "/g"), int_field(doc, "n", ""));
    return Json{{"lift", encode(finsymp::lift_to_integral(g))}, {"reduced", encode(g.g)}};
  };

  auto *pi0 = grp->add_subcommand("pi0", "Multiplier fibers of GSp_2d(Z/n) and the adjusted section");
  pi0->add_option("--d", r.opt.d)->required()->check(CLI::PositiveNumber);
  pi0->add_option("--n", r.opt.n)->required()->check(CLI::Range(2, 1 << 20));
  r.handlers[pi0] = [&r] {
    auto n = static_cast<std::int64_t>(r.opt.n);
    Json fibers = Json::array();
    std::uint64_t first = 0;
    bool equal = true;
    for (auto alpha : finsymp::units_mod(n)) {
      auto e = finsymp::enumerate_fiber(r.opt.d, n, alpha, Exec::Parallel, r.budget_or(finsymp::default_budget));
      if (fibers.empty()) first = e.size();
      equal = equal && e.size() == first;
      auto s = finsymp::validate(finsymp::adjusted_section(r.opt.d, alpha), n);
      fibers.push_back({{"alpha", alpha}, {"size", encode_u64(e.size())}, {"section", encode(s.g)}, {"section_multiplier", s.c}});
    }
    return Json{{"d", r.opt.d}, {"n", n}, {"fibers", fibers}, {"equinumerous", equal}};
  };

  auto *cos = grp->add_subcommand("cosets", "Right cosets of K g K, K = GSp_2d(Z_p)");
  cos->add_option("--d", r.opt.d)->required()->check(CLI::PositiveNumber);
  cos->add_option("--p", r.opt.prime)->required();
  cos->add_option("--type", r.opt.type, "T, central or m:a1,...,ad")->required();
  r.handlers[cos] = [&r] {
    if (!is_prime(r.opt.prime)) throw input_error("--p: expected a prime");
    auto key = parse_type(r.opt.type, r.opt.d);
    auto list = finsymp::double_coset_decompose(r.opt.d, r.opt.prime, finsymp::diagonal_representative(key, r.opt.prime));
    Json cosets = Json::array();
    for (const auto &c : list.cosets)
      cosets.push_back({{"lattice", encode(c.lattice)}, {"representative", encode(c.representative)}});
    return Json{{"d", list.d}, {"p", list.p}, {"g", encode(list.g)}, {"class", encode_key(key)},
                {"count", list.cosets.size()}, {"cosets", cosets}};
  };

  auto *conv = grp->add_subcommand("convolve", "Convolution of Hecke algebra elements {f1, f2}");
  r.handlers[conv] = [&r] {
    const Json &doc = r.input();
    std::size_t d = size_field(doc, "d", "");
    std::int64_t p = int_field(doc, "p", "");
    std::int64_t n = doc.contains("n") ? int_field(doc, "n", "") : 1;
    auto f1 = decode_hecke(require(doc, "f1", ""), d, p, n, "/f1");
    auto f2 = decode_hecke(require(doc, "f2", ""), d, p, n, "/f2");
    return encode_hecke(finsymp::hecke_convolve(f1, f2));
  };
}

void register_unitary(CLI::App &app, Runner &r) {
  auto *gc = app.add_subcommand("galcoh", "H^1(R, T) orbits for U(p, q)");
  gc->require_subcommand(1);

  auto *orb = gc->add_subcommand("orbits", "Orbits of the Weyl group and sigma on sign vectors");
  orb->add_option("--p", r.opt.p)->required();
  orb->add_option("--q", r.opt.q)->required();
  orb->add_flag("--members", r.opt.members, "list every sign vector of each orbit");
  r.handlers[orb] = [&r] {
    auto orbits = unitary::orbit_decomposition(r.opt.p, r.opt.q, r.budget_or(unitary::max_coordinates));
    Json list = Json::array();
    for (const auto &o : orbits) {
      const auto &least = o.members.front();
      Json e{{"least", encode_coords(least)},
             {"invariant", static_cast<std::int64_t>(least.p_xi()) - static_cast<std::int64_t>(least.q_xi())},
             {"size", o.members.size()}};
      if (r.opt.members) {
        Json ms = Json::array();
        for (const auto &m : o.members) ms.push_back(encode_coords(m));
        e["members"] = ms;
      }
      list.push_back(std::move(e));
    }
    return Json{{"p", r.opt.p}, {"q", r.opt.q}, {"count", orbits.size()}, {"orbits", list}};
  };

  auto *ker = gc->add_subcommand("kernel", "Kernel of H^1(R, T) -> H^1(R, G)");
  ker->add_option("--p", r.opt.p)->required();
  ker->add_option("--q", r.opt.q)->required();
  r.handlers[ker] = [&r] {
    if (r.opt.p + r.opt.q > r.budget_or(unitary::max_coordinates))
      throw resource_error("p + q exceeds the coordinate budget");
    auto ks = unitary::kernel_to_G(r.opt.p, r.opt.q);
    Json list = Json::array();
    for (const auto &k : ks) list.push_back(encode_coords(k));
    return Json{{"p", r.opt.p}, {"q", r.opt.q}, {"size", ks.size()}, {"kernel", list}};
  };

  auto *inf = app.add_subcommand("innerforms", "Local-global gluing of inner forms of GL_n");
  inf->require_subcommand(1);

  // Accepts {"n", <key>: [...]} or a bare list together with --n.
  auto list_input = [&r](const std::string &key, const CLI::Option *n_opt) {
    const Json &doc = r.input();
    if (doc.is_array()) {
      if (!n_opt->count()) throw input_error("a bare list needs --n");
      return std::pair<std::size_t, const Json *>{r.opt.n, &doc};
    }
    std::size_t n = n_opt->count() ? r.opt.n : size_field(doc, "n", "");
    return std::pair<std::size_t, const Json *>{n, &array_field(doc, key, "")};
  };

  auto *glue = inf->add_subcommand("glue", "Does a global inner form with these local data exist");
  auto *glue_n = glue->add_option("--n", r.opt.n)->check(CLI::PositiveNumber);
  r.handlers[glue] = [&r, list_input, glue_n] {
    auto [n, places] = list_input("places", glue_n);
    std::vector<unitary::LocalInnerFormDatum> data;
    for (std::size_t i = 0; i < places->size(); ++i) {
      const auto path = (r.input().is_array() ? "/" : "/places/") + std::to_string(i);
      auto v = decode_place((*places)[i], path);
      try {
        unitary::check_datum(v, n);
      } catch (const Error &e) {
        throw input_error(path + ": " + e.what());
      }
      data.push_back(v);
    }
    Json out{{"n", n}, {"exists", unitary::global_exists(data, n)}};
    if (n % 2 == 0) {
      Json eps = Json::array();
      for (const auto &v : data) eps.push_back(unitary::epsilon(v, n));
      out["epsilons"] = eps;
    }
    return out;
  };

  auto *div = inf->add_subcommand("division-check", "Does a division algebra suffice at the split places");
  auto *div_n = div->add_option("--n", r.opt.n)->check(CLI::PositiveNumber);
  r.handlers[div] = [&r, list_input, div_n] {
    auto [n, ms] = list_input("m", div_n);
    auto split = decode_list<std::size_t>(*ms, "/m", decode_size);
    return Json{{"n", n}, {"sufficient", unitary::division_algebra_sufficient(split, n)}};
  };
}

void register_pel(CLI::App &app, Runner &r) {
  auto *grp = app.add_subcommand("pel", "PEL data: axioms, good primes, reflex field, determinant polynomial");
  grp->require_subcommand(1);

  auto *val = grp->add_subcommand("validate", "Check every PEL axiom");
  r.handlers[val] = [&r] {
    auto rep = pel::validate_pel(decode_datum(r.input()));
    Json vs = Json::array();
    for (const auto &v : rep.verdicts) vs.push_back({{"axiom", v.axiom}, {"pass", v.pass}, {"detail", v.detail}});
    return Json{{"verdicts", vs}, {"all_pass", rep.all_pass()}};
  };

  auto *gp = grp->add_subcommand("good-prime", "Is p a good prime for the datum");
  gp->add_option("--p", r.opt.prime)->required();
  r.handlers[gp] = [&r] {
    if (!is_prime(r.opt.prime)) throw input_error("--p: expected a prime");
    auto d = decode_datum(r.input());
    auto v = pel::good_prime(d, Integer(r.opt.prime));
    return Json{{"p", r.opt.prime}, {"good", v.good}, {"reasons", v.reasons},
                {"discriminant", encode(pel::discriminant(d.algebra))}};
  };

  auto *rf = grp->add_subcommand("reflex", "Traces on V^{-1,0} and the reflex field");
  r.handlers[rf] = [&r] {
    auto res = pel::reflex_traces(decode_datum(r.input()));
    return Json{{"traces", encode_list(res.traces)},
                {"field", res.kind == pel::ReflexKind::Rational ? "Q" : "imaginary_quadratic"},
                {"discriminant", encode(res.discriminant)}};
  };

  auto *dp = grp->add_subcommand("detpoly", "det(sum X_j alpha_j | V^{-1,0}) as monomial terms");
  r.handlers[dp] = [&r] {
    auto d = decode_datum(r.input());
    Json terms = Json::array();
    for (const auto &[mono, c] : pel::determinant_polynomial(d)) terms.push_back({{"exponents", mono}, {"coeff", encode(c)}});
    return Json{{"terms", terms}, {"bad_primes", encode_list(pel::bad_primes(d))}};
  };
}

void register_zeta(CLI::App &app, Runner &r) {
  auto *grp = app.add_subcommand("zeta", "Point counts and rational zeta functions");
  grp->require_subcommand(1);

  auto *cnt = grp->add_subcommand("count", "N_1..N_max_r by brute force");
  r.handlers[cnt] = [&r] {
    const Json &doc = r.input();
    auto v = decode_variety(doc);
    unsigned max_r = doc.contains("max_r") ? static_cast<unsigned>(size_field(doc, "max_r", "")) : 1;
    auto counts = zeta::count_series(v, max_r, Exec::Parallel, r.budget_or(zeta::default_budget));
    Json out = Json::array();
    for (auto c : counts) out.push_back(encode_u64(c));
    return Json{{"counts", out}, {"field_size", encode_u64(v.q())}};
  };

  auto *ser = grp->add_subcommand("series", "Coefficients of exp(sum N_r T^r / r)");
  r.handlers[ser] = [&r] {
    const Json &doc = r.input();
    auto counts = integer_list(require(doc, "counts", ""), "/counts");
    std::size_t precision = doc.contains("precision") ? size_field(doc, "precision", "") : counts.size();
    return Json{{"series", encode_list(zeta::zeta_series(counts, precision))}};
  };

  auto *rat = grp->add_subcommand("rational", "P/Q from {counts} or {series} with degree bounds");
  r.handlers[rat] = [&r] {
    const Json &doc = r.input();
    std::vector<Rational> series;
    if (doc.contains("series")) {
      series = rational_list(doc["series"], "/series");
    } else {
      auto counts = integer_list(require(doc, "counts", ""), "/counts");
      series = zeta::zeta_series(counts, counts.size());
    }
    if (series.empty()) throw input_error("/series: empty");
    std::size_t half = (series.size() - 1) / 2;
    std::size_t dp = doc.contains("deg_p") ? size_field(doc, "deg_p", "") : half;
    std::size_t dq = doc.contains("deg_q") ? size_field(doc, "deg_q", "") : half;
    auto z = zeta::rational_recovery(series, dp, dq);
    return Json{{"numerator", encode_list(z.p)}, {"denominator", encode_list(z.q)}};
  };

  auto *chk = grp->add_subcommand("check", "Lefschetz consistency and functional equation");
  r.handlers[chk] = [&r] {
    const Json &doc = r.input();
    zeta::RationalZeta z{integer_list(require(doc, "numerator", ""), "/numerator"),
                         integer_list(require(doc, "denominator", ""), "/denominator")};
    auto counts = integer_list(require(doc, "counts", ""), "/counts");
    Json out{{"lefschetz", zeta::lefschetz_consistency(z, counts)}};
    if (doc.contains("field_size"))
      out["functional_equation"] =
          zeta::functional_equation_holds(z.p, decode_integer(doc["field_size"], "/field_size"));
    return out;
  };
}

void register_trace(CLI::App &app, Runner &r) {
  auto *grp = app.add_subcommand("trace", "Finite trace formula");
  grp->require_subcommand(1);

  auto *chk = grp->add_subcommand("check", "Direct, geometric and (abelian) spectral sides");
  chk->add_option("--group", r.opt.group, "table JSON file or catalog name");
  chk->add_option("--subgroup", r.opt.subgroup, "JSON list of generators of Gamma");
  chk->add_option("--f", r.opt.f, "JSON list of values of f");
  r.handlers[chk] = [&r] {
    Json doc = r.opt.group.empty() || r.opt.f.empty() ? r.input() : Json::object();
    std::optional<trace::FiniteGroupTable> g;
    if (!r.opt.group.empty()) {
      std::ifstream file(r.opt.group);
      if (file) {
        std::string text(std::istreambuf_iterator<char>(file), {});
        g = decode_group(parse_json_text(text, "--group"), "--group");
      } else {
        g = trace::catalog_group(r.opt.group);
      }
    } else {
      g = decode_group(require(doc, "group", ""), "/group");
    }
    Json sub = !r.opt.subgroup.empty() ? parse_json_text(r.opt.subgroup, "--subgroup")
                                       : doc.value("subgroup", Json());
    if (!sub.is_null()) {
      auto gens = element_list(sub, "subgroup");
      for (auto x : gens)
        if (x >= g->order()) throw input_error("subgroup: element index out of range");
      g = g->with_gamma(trace::generated_subgroup(*g, gens));
    }
    Json fj = !r.opt.f.empty() ? parse_json_text(r.opt.f, "--f") : require(doc, "f", "");
    auto f = rational_list(fj, "f");
    if (f.size() != g->order()) throw input_error("f: expected one value per group element");
    auto rep = trace::trace_check(*g, f);
    Json out{{"order", g->order()},
             {"gamma", g->gamma()},
             {"direct", encode(rep.direct)},
             {"geometric", encode(rep.geometric)},
             {"agree", rep.agree}};
    if (rep.spectral) out["spectral"] = encode(*rep.spectral);
    return out;
  };
}

int exit_code(const Error &e) {
  switch (e.kind()) {
  case Error::Kind::Input:
    return BadInput;
  case Error::Kind::Resource:
    return BudgetExceeded;
  default:
    return DomainFailure;
  }
}

} // namespace

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err) {
  CLI::App app{"Exact computations around Shimura varieties", "shimura"};
  app.fallthrough();
  app.require_subcommand(1);
  Runner r(in);
  app.add_option("--input", r.opt.input_path, "read the input document from this file instead of stdin");
  r.opt.budget_opt = app.add_option("--budget", r.opt.budget, "override the enumeration limit");

  register_siegel(app, r);
  register_hodge(app, r);
  register_abvar(app, r);
  register_finsymp(app, r);
  register_unitary(app, r);
  register_pel(app, r);
  register_zeta(app, r);
  register_trace(app, r);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    app.exit(e, out, err);
    return Ok;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return BadInput;
  }

  const CLI::App *leaf = &app;
  while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
  auto it = r.handlers.find(leaf);
  if (it == r.handlers.end()) {
    err << "error: no subcommand selected\n";
    return BadInput;
  }

  try {
    Json doc = it->second();
    out << doc.dump(2) << '\n';
    return Ok;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const Json::exception &e) {
    err << "error: malformed input: " << e.what() << '\n';
    return BadInput;
  }
}

} // namespace shimura::cli
