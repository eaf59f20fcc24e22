#include "crs/json_io.hpp"

namespace crs {

namespace {

Json pt_to_json(Pt p) {
  if (p == kNegInf) return Json("-inf");
  if (p == kPosInf) return Json("inf");
  return Json(p);
}

Pt pt_from_json(const Json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") return kNegInf;
    if (s == "inf") return kPosInf;
    throw std::invalid_argument("bad point: " + s);
  }
  return j.get<Pt>();
}

}  // namespace

Json morphism_to_json(const SiteMorphism& f) {
  Json j;
  j["site"] = site_name(f.site);
  j["dom"] = f.dom;
  j["cod"] = f.cod;
  Json vals = Json::array();
  for (Pt v : f.values) vals.push_back(pt_to_json(v));
  j["values"] = vals;
  return j;
}

SiteMorphism morphism_from_json(const Json& j) {
  SiteMorphism f;
  auto s = site_from_name(j.at("site").get<std::string>());
  if (!s) throw std::invalid_argument("bad site");
  f.site = *s;
  f.dom = j.at("dom").get<int>();
  f.cod = j.at("cod").get<int>();
  for (const auto& v : j.at("values")) f.values.push_back(pt_from_json(v));
  if (!is_valid(f)) throw std::invalid_argument("morphism not weakly increasing/in range");
  return f;
}

Json crossed_group_to_json(const CrossedGroupTable& G) {
  Json j;
  j["schema_version"] = 1;
  j["site"] = site_name(G.site);
  j["max_level"] = G.max_level;
  Json levels = Json::array();
  for (int a = 0; a <= G.max_level; ++a) {
    Json lg;
    lg["n"] = a;
    lg["order"] = G.order(a);
    lg["unit"] = G.lvl[a].unit;
    if (!G.lvl[a].mul.empty())
      lg["mul"] = G.lvl[a].mul;
    else {
      Json elems = Json::array();
      for (const auto& e : G.lvl[a].elems) {
        Json el;
        el["perm"] = e.perm;
        el["signs"] = e.signs;
        elems.push_back(el);
      }
      lg["elements"] = elems;
    }
    levels.push_back(lg);
  }
  j["levels"] = levels;
  Json rest = Json::array(), act = Json::array();
  for (int a = 0; a <= G.max_level; ++a)
    for (int b = 0; b <= G.max_level; ++b) {
      const int H = homs(G.site, b, a).size();
      for (int32_t p = 0; p < H; ++p) {
        Json row;
        row["cod"] = a;
        row["dom"] = b;
        row["phi"] = p;
        Json vals = Json::array();
        for (int32_t x = 0; x < G.order(a); ++x) vals.push_back(G.restrict_el(a, b, p, x));
        row["values"] = vals;
        rest.push_back(row);
      }
      for (int32_t x = 0; x < G.order(a); ++x) {
        Json row;
        row["cod"] = a;
        row["dom"] = b;
        row["x"] = x;
        Json vals = Json::array();
        for (int32_t p = 0; p < H; ++p) vals.push_back(G.act_on(a, b, x, p));
        row["values"] = vals;
        act.push_back(row);
      }
    }
  j["restriction"] = rest;
  j["action"] = act;
  return j;
}

Json verify_report_to_json(const VerifyReport& rep) {
  Json j;
  j["schema_version"] = 1;
  j["ok"] = rep.ok;
  j["checks"] = rep.checks;
  Json v = Json::array();
  for (const auto& viol : rep.violations) {
    Json one;
    one["kind"] = viol.kind;
    one["detail"] = viol.detail;
    v.push_back(one);
  }
  j["violations"] = v;
  return j;
}

Json family_to_json(const SubgroupFamily& F) {
  Json j;
  j["orders"] = F.orders();
  Json m = Json::array();
  for (const auto& lvl : F.members) m.push_back(lvl);
  j["members"] = m;
  return j;
}

Json table_report_to_json(const TableReport& rep) {
  Json j;
  j["schema_version"] = 1;
  j["table"] = rep.which;
  j["max_level"] = rep.max_level;
  j["families_found"] = rep.families_found;
  j["ok"] = rep.ok;
  if (!rep.detail.empty()) j["detail"] = rep.detail;
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    Json row;
    row["name"] = r.name.empty() ? Json(nullptr) : Json(r.name);
    row["symbol"] = r.symbol;
    row["orders_by_level"] = r.found_orders;
    row["matched"] = r.matched;
    if (!r.quadruple.empty()) row["quadruple"] = r.quadruple;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

Json goursat_analysis_to_json(const IntervalGoursatAnalysis& A) {
  Json j;
  j["schema_version"] = 1;
  j["max_level"] = A.JW.max_level;
  j["candidates"] = A.quadruples.size();
  j["closed"] = A.closed_count;
  Json q = Json::array();
  for (const auto& r : A.quadruples) {
    Json one;
    one["quadruple"] = r.label;
    one["orders"] = r.family.orders();
    one["nabla_closed"] = r.nabla_closed;
    if (!r.witness.empty()) one["witness"] = r.witness;
    q.push_back(one);
  }
  j["quadruples"] = q;
  return j;
}

Json presheaf_to_json(const PresheafTable& X) {
  Json j;
  j["schema_version"] = 1;
  j["site"] = site_name(X.site);
  j["max_level"] = X.max_level;
  j["sizes"] = X.size;
  Json rest = Json::array();
  for (int a = 0; a <= X.max_level; ++a)
    for (int b = 0; b <= X.max_level; ++b) {
      const int H = homs(X.site, b, a).size();
      for (int32_t p = 0; p < H; ++p) {
        Json row;
        row["cod"] = a;
        row["dom"] = b;
        row["phi"] = p;
        Json vals = Json::array();
        for (int32_t x = 0; x < X.size[a]; ++x) vals.push_back(X.restrict_el(a, b, p, x));
        row["values"] = vals;
        rest.push_back(row);
      }
    }
  j["restriction"] = rest;
  return j;
}

}  // namespace crs
