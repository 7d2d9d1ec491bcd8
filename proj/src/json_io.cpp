#include "dualmod/json_io.hpp"

#include <cmath>
#include <map>

namespace dualmod {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError("at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Index count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
  return static_cast<Index>(j.get<long long>());
}

const Json& array(const Json& j, const std::string& path, std::size_t expected_size = SIZE_MAX) {
  if (!j.is_array()) fail(path, "expected an array");
  if (expected_size != SIZE_MAX && j.size() != expected_size) {
    fail(path, "expected " + std::to_string(expected_size) + " entries, found " +
                   std::to_string(j.size()));
  }
  return j;
}

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

RealMatrix real_matrix(const Json& j, Index rows, Index cols, const std::string& path) {
  RealMatrix a(rows, cols);
  array(j, path, static_cast<std::size_t>(rows));
  for (Index r = 0; r < rows; ++r) {
    const auto rp = at(path, static_cast<std::size_t>(r));
    const Json& row = array(j[static_cast<std::size_t>(r)], rp, static_cast<std::size_t>(cols));
    for (Index c = 0; c < cols; ++c) a(r, c) = number(row[static_cast<std::size_t>(c)], at(rp, c));
  }
  return a;
}

std::pair<RealMatrix, RealMatrix> dual_matrix(const Json& j, Index rows, Index cols,
                                              const std::string& path) {
  RealMatrix re(rows, cols), ze(rows, cols);
  array(j, path, static_cast<std::size_t>(rows));
  for (Index r = 0; r < rows; ++r) {
    const auto rp = at(path, static_cast<std::size_t>(r));
    const Json& row = array(j[static_cast<std::size_t>(r)], rp, static_cast<std::size_t>(cols));
    for (Index c = 0; c < cols; ++c) {
      const Dual x = dual_from_json(row[static_cast<std::size_t>(c)], at(rp, c));
      re(r, c) = x.re;
      ze(r, c) = x.ze;
    }
  }
  return {re, ze};
}

Json dual_matrix_json(const RealMatrix& re, const RealMatrix& ze) {
  Json out = Json::array();
  for (Index r = 0; r < re.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < re.cols(); ++c) row.push_back(to_json(Dual(re(r, c), ze(r, c))));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_list(const std::vector<DualVec>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

std::vector<DualVec> vectors_from(const Json& j, const std::string& path) {
  std::vector<DualVec> out;
  array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_from_json(j[i], at(path, i)));
  return out;
}

Json pair_list(const std::vector<std::pair<DualVec, DualVec>>& ps) {
  Json out = Json::array();
  for (const auto& [e, f] : ps) out.push_back(Json::array({to_json(e), to_json(f)}));
  return out;
}

std::vector<std::pair<DualVec, DualVec>> pairs_from(const Json& j, const std::string& path) {
  std::vector<std::pair<DualVec, DualVec>> out;
  array(j, path);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = at(path, i);
    array(j[i], p, 2);
    out.emplace_back(vector_from_json(j[i][0], at(p, 0)), vector_from_json(j[i][1], at(p, 1)));
  }
  return out;
}

Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

const char* part_name(Part p) { return p == Part::head ? "head" : "tail"; }

const char* component_name(Component c) {
  switch (c) {
    case Component::full: return "full";
    case Component::re: return "re";
    case Component::ze: return "ze";
  }
  return "full";
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": invalid JSON");
  }
}

Json to_json(const Dual& x) { return Json::array({x.re, x.ze}); }

Json to_json(const DualVec& v) {
  Json head = Json::array();
  for (Index i = 0; i < v.n(); ++i) head.push_back(to_json(v.head(i)));
  Json tail = Json::array();
  for (Index j = 0; j < v.m(); ++j) tail.push_back(v.tail(j));
  return Json{{"n", v.n()}, {"m", v.m()}, {"head", head}, {"tail", tail}};
}

Json to_json(const RealMatrix& a) {
  Json out = Json::array();
  for (Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < a.cols(); ++c) row.push_back(finite_or_null(a(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const ModuleMapd& f) {
  return Json{{"n", f.n()},
              {"m", f.m()},
              {"s", f.s()},
              {"t", f.t()},
              {"C", dual_matrix_json(f.c_re(), f.c_ze())},
              {"P", to_json(f.p())},
              {"D", to_json(f.d())},
              {"Q", to_json(f.q())}};
}

Json to_json(const SplitBasisd& b) {
  const auto [d1, d2] = b.dimension();
  return Json{{"S1", vector_list(b.s1)}, {"S2", vector_list(b.s2)}, {"dimension", {d1, d2}}};
}

Json to_json(const Expr& e) {
  switch (e.op()) {
    case Op::constant: return Json{{"op", "const"}, {"value", to_json(e.value())}};
    case Op::coord:
      return Json{{"op", "coord"},
                  {"part", part_name(e.part())},
                  {"slot", e.slot()},
                  {"component", component_name(e.component())}};
    default: {
      Json args = Json::array();
      for (const auto& a : e.args()) args.push_back(to_json(a));
      return Json{{"op", op_name(e.op())}, {"args", args}};
    }
  }
}

Json to_json(const ExprFunction& f) {
  Json comps = Json::array();
  for (const auto& c : f.components()) comps.push_back(to_json(c));
  return Json{{"domain", {f.n(), f.m()}}, {"codomain", {f.s(), f.t()}}, {"components", comps}};
}

Json to_json(const GramForm& g) {
  return Json{{"N", g.N()}, {"M", g.M()}, {"G", dual_matrix_json(g.g_re(), g.g_ze())}};
}

Json to_json(const DarbouxBasis& b) {
  return Json{{"pairs_head", pair_list(b.pairs_head)},
              {"pairs_tail", pair_list(b.pairs_tail)},
              {"dimension", {2 * b.n(), 2 * b.m()}}};
}

Json to_json(const CrReport& r) {
  Json out{{"point", to_json(r.point)},
           {"passed", r.passed},
           {"tolerance", r.tolerance},
           {"residuals",
            {{"a", r.residuals.a}, {"b", r.residuals.b}, {"c", r.residuals.c}, {"d", r.residuals.d}}},
           {"jacobian", to_json(r.jacobian)}};
  if (r.derivative) out["derivative"] = to_json(*r.derivative);
  return out;
}

Json to_json(const LimitReport& r) {
  return Json{{"radii", r.radii}, {"quotients", r.quotients}, {"passed", r.passed}};
}

Json to_json(const AtlasReport& r) {
  Json out = Json::array();
  for (const auto& c : r.checks) {
    Json item{{"axiom", c.axiom},
              {"chart_pair", c.chart_pair},
              {"passed", c.passed},
              {"samples", c.samples},
              {"worst", finite_or_null(c.worst)},
              {"witness", c.witness ? to_json(*c.witness) : Json(nullptr)}};
    if (!c.detail.empty()) item["detail"] = c.detail;
    out.push_back(std::move(item));
  }
  return out;
}

Json to_json(const FormReport& r) {
  return Json{{"passed", r.passed()},
              {"axioms",
               {{"i", r.bilinear},
                {"ii", r.bilinear},
                {"iii", r.antisymmetric},
                {"iv", r.nondegenerate_re},
                {"v", r.nondegenerate_ze}}},
              {"tail_zero_divisor", r.tail_zero_divisor},
              {"antisymmetry_residual", r.antisymmetry_residual},
              {"tail_re_residual", r.tail_re_residual},
              {"witness_iv", r.witness_iv ? to_json(*r.witness_iv) : Json(nullptr)},
              {"witness_v", r.witness_v ? to_json(*r.witness_v) : Json(nullptr)}};
}

Dual dual_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a dual number [re, ze]");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

DualVec vector_from_json(const Json& j, const std::string& path) {
  const Index n = count(field(j, "n", path), at(path, "n"));
  const Index m = count(field(j, "m", path), at(path, "m"));
  const auto hp = at(path, "head");
  const auto tp = at(path, "tail");
  const Json& head = array(field(j, "head", path), hp, static_cast<std::size_t>(n));
  const Json& tail = array(field(j, "tail", path), tp, static_cast<std::size_t>(m));
  DualVec v(n, m);
  for (Index i = 0; i < n; ++i) {
    v.set_head(i, dual_from_json(head[static_cast<std::size_t>(i)], at(hp, static_cast<std::size_t>(i))));
  }
  for (Index k = 0; k < m; ++k) {
    v.tail(k) = number(tail[static_cast<std::size_t>(k)], at(tp, static_cast<std::size_t>(k)));
  }
  return v;
}

ModuleMapd map_from_json(const Json& j, const std::string& path) {
  const Index n = count(field(j, "n", path), at(path, "n"));
  const Index m = count(field(j, "m", path), at(path, "m"));
  const Index s = count(field(j, "s", path), at(path, "s"));
  const Index t = count(field(j, "t", path), at(path, "t"));
  auto [c_re, c_ze] = dual_matrix(field(j, "C", path), s, n, at(path, "C"));
  return ModuleMapd(std::move(c_re), std::move(c_ze), real_matrix(field(j, "P", path), s, m, at(path, "P")),
                    real_matrix(field(j, "D", path), t, n, at(path, "D")),
                    real_matrix(field(j, "Q", path), t, m, at(path, "Q")));
}

SplitBasisd basis_from_json(const Json& j, const std::string& path) {
  SplitBasisd b;
  b.s1 = vectors_from(field(j, "S1", path), at(path, "S1"));
  b.s2 = vectors_from(field(j, "S2", path), at(path, "S2"));
  return b;
}

Expr expr_from_json(const Json& j, const std::string& path) {
  const Json& op_field = field(j, "op", path);
  if (!op_field.is_string()) fail(at(path, "op"), "expected a string");
  const std::string op = op_field.get<std::string>();
  if (op == "const") return Expr::constant(dual_from_json(field(j, "value", path), at(path, "value")));
  if (op == "coord") {
    const Json& part = field(j, "part", path);
    if (!part.is_string() || (part != "head" && part != "tail")) {
      fail(at(path, "part"), "expected \"head\" or \"tail\"");
    }
    Component comp = Component::full;
    if (const auto it = j.find("component"); it != j.end()) {
      if (*it == "full") comp = Component::full;
      else if (*it == "re") comp = Component::re;
      else if (*it == "ze") comp = Component::ze;
      else fail(at(path, "component"), "expected \"full\", \"re\" or \"ze\"");
    }
    return Expr::coord(part == "head" ? Part::head : Part::tail,
                       count(field(j, "slot", path), at(path, "slot")), comp);
  }
  static const std::map<std::string, std::pair<Op, std::size_t>> kOps = {
      {"add", {Op::add, 2}}, {"sub", {Op::sub, 2}},     {"mul", {Op::mul, 2}},
      {"neg", {Op::neg, 1}}, {"inv", {Op::inv, 1}},     {"sharp", {Op::sharp, 1}},
      {"re_part", {Op::re_part, 1}}, {"ze_part", {Op::ze_part, 1}}};
  const auto it = kOps.find(op);
  if (it == kOps.end()) fail(at(path, "op"), "unknown operation \"" + op + "\"");
  const auto ap = at(path, "args");
  const Json& args = array(field(j, "args", path), ap, it->second.second);
  std::vector<Expr> sub;
  for (std::size_t i = 0; i < args.size(); ++i) sub.push_back(expr_from_json(args[i], at(ap, i)));
  switch (it->second.first) {
    case Op::add: return sub[0] + sub[1];
    case Op::sub: return sub[0] - sub[1];
    case Op::mul: return sub[0] * sub[1];
    case Op::neg: return -sub[0];
    case Op::inv: return inv(sub[0]);
    case Op::sharp: return sharp(sub[0]);
    case Op::re_part: return re_part(sub[0]);
    case Op::ze_part: return ze_part(sub[0]);
    default: break;
  }
  fail(path, "unreachable operation");
}

namespace {

// Rejects coordinates outside the declared domain.
void check_slots(const Expr& e, Index n, Index m, const std::string& path) {
  if (e.op() == Op::coord) {
    const Index limit = e.part() == Part::head ? n : m;
    if (e.slot() >= limit) fail(path, "coordinate slot " + std::to_string(e.slot()) + " outside the domain");
    return;
  }
  for (const auto& a : e.args()) check_slots(a, n, m, path);
}

}  // namespace

ExprFunction function_from_json(const Json& j, const std::string& path) {
  const auto dp = at(path, "domain");
  const auto cp = at(path, "codomain");
  const Json& dom = array(field(j, "domain", path), dp, 2);
  const Json& cod = array(field(j, "codomain", path), cp, 2);
  const Index n = count(dom[0], at(dp, 0)), m = count(dom[1], at(dp, 1));
  const Index s = count(cod[0], at(cp, 0)), t = count(cod[1], at(cp, 1));
  const auto kp = at(path, "components");
  const Json& comps = array(field(j, "components", path), kp, static_cast<std::size_t>(s + t));
  std::vector<Expr> es;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    es.push_back(expr_from_json(comps[i], at(kp, i)));
    check_slots(es.back(), n, m, at(kp, i));
  }
  return ExprFunction(n, m, s, t, std::move(es));
}

GramForm form_from_json(const Json& j, const std::string& path) {
  const Index big_n = count(field(j, "N", path), at(path, "N"));
  const Index big_m = count(field(j, "M", path), at(path, "M"));
  auto [re, ze] = dual_matrix(field(j, "G", path), big_n + big_m, big_n + big_m, at(path, "G"));
  return GramForm(big_n, big_m, std::move(re), std::move(ze));
}

DarbouxBasis darboux_from_json(const Json& j, const std::string& path) {
  DarbouxBasis b;
  b.pairs_head = pairs_from(field(j, "pairs_head", path), at(path, "pairs_head"));
  b.pairs_tail = pairs_from(field(j, "pairs_tail", path), at(path, "pairs_tail"));
  return b;
}

Atlas atlas_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto charts_it = j.find("charts");
  const bool user = charts_it != j.end() && charts_it->is_array() && !charts_it->empty() &&
                    (*charts_it)[0].is_object() && (*charts_it)[0].contains("forward");
  if (!user) {
    const Index n = count(field(j, "n", path), at(path, "n"));
    const Index m = count(field(j, "m", path), at(path, "m"));
    const ProjectiveSpace space(n, m);
    Atlas full = space.atlas();
    if (charts_it == j.end()) return full;
    const auto cp = at(path, "charts");
    array(*charts_it, cp);
    Atlas picked = full;
    picked.charts.clear();
    for (std::size_t c = 0; c < charts_it->size(); ++c) {
      const auto p = at(cp, c);
      const Index i = count(field((*charts_it)[c], "i", p), at(p, "i"));
      const Index jj = count(field((*charts_it)[c], "j", p), at(p, "j"));
      if (i > n || jj > m) fail(p, "chart index out of range");
      picked.charts.push_back(space.chart(i, jj));
    }
    const auto charts = picked.charts;
    picked.transition = [space, charts](std::size_t a, std::size_t b) {
      return space.transition(charts[a].label[0], charts[a].label[1], charts[b].label[0],
                              charts[b].label[1]);
    };
    return picked;
  }

  Atlas atlas;
  const auto cp = at(path, "charts");
  for (std::size_t c = 0; c < charts_it->size(); ++c) {
    const auto p = at(cp, c);
    const Json& cj = (*charts_it)[c];
    Chart ch;
    ch.label = {static_cast<Index>(c)};
    ch.forward = function_from_json(field(cj, "forward", p), at(p, "forward"));
    ch.inverse = function_from_json(field(cj, "inverse", p), at(p, "inverse"));
    if (cj.contains("domain")) {
      ch.domain = function_from_json(cj["domain"], at(p, "domain"));
    } else {
      ch.domain = ExprFunction(ch.forward.n(), ch.forward.m(), 0, 0, {});
    }
    if (c == 0) {
      atlas.ambient_n = ch.forward.n();
      atlas.ambient_m = ch.forward.m();
      atlas.n = ch.forward.s();
      atlas.m = ch.forward.t();
    }
    if (ch.forward.n() != atlas.ambient_n || ch.forward.m() != atlas.ambient_m ||
        ch.forward.s() != atlas.n || ch.forward.t() != atlas.m || ch.inverse.n() != atlas.n ||
        ch.inverse.m() != atlas.m || ch.inverse.s() != atlas.ambient_n ||
        ch.inverse.t() != atlas.ambient_m || ch.domain.n() != atlas.ambient_n ||
        ch.domain.m() != atlas.ambient_m) {
      fail(p, "chart shapes are inconsistent with the first chart");
    }
    atlas.charts.push_back(std::move(ch));
  }
  if (atlas.charts.empty()) fail(cp, "atlas has no charts");
  return atlas;
}

}  // namespace dualmod
