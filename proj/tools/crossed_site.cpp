#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "crs/base_change.hpp"
#include "crs/classify.hpp"
#include "crs/families.hpp"
#include "crs/json_io.hpp"
#include "crs/monoidal.hpp"
#include "crs/parallel.hpp"

namespace {

using namespace crs;

struct Common {
  std::string site = "aug-delta";
  int max_level = 5;
  int threads = 0;
  int word_cap = 4;
  int probe_cap = -1;
  bool json = false;
  std::string output;
  long long seed = 0;  // reserved; the core has no randomized algorithms
};

void add_common(CLI::App* cmd, Common& c, bool with_site = true) {
  if (with_site)
    cmd->add_option("--site", c.site, "delta | aug-delta | nabla")->capture_default_str();
  cmd->add_option("--max-level", c.max_level, "degree truncation")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads (0 = hardware)");
  cmd->add_option("--word-cap", c.word_cap, "word length cap")->capture_default_str();
  cmd->add_option("--probe-cap", c.probe_cap, "membership probe cap (default: level+2)");
  cmd->add_flag("--json", c.json, "JSON output");
  cmd->add_option("--output", c.output, "write to a file instead of stdout");
  cmd->add_option("--seed", c.seed, "reserved");
}

Site parse_site(const std::string& s) {
  auto v = site_from_name(s);
  if (!v) throw CLI::ValidationError("--site", "unknown site " + s);
  return *v;
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(c.output);
    out << text << "\n";
  }
}

CrossedGroupTable build_family(const std::string& name, Site site, int L) {
  if (name == "trivial") return trivial_table(site, L);
  if (name == "sym") return sym_table(site, L);
  if (name == "cyc") {
    if (site != Site::AugDelta) throw CLI::ValidationError("--family", "cyc lives on aug-delta");
    return cyc_table(L);
  }
  if (name == "dihedral") {
    if (site != Site::AugDelta)
      throw CLI::ValidationError("--family", "dihedral lives on aug-delta");
    return dihedral_table(L);
  }
  if (name == "hyp") {
    if (site == Site::Delta) throw CLI::ValidationError("--family", "hyp lives on aug-delta/nabla");
    return hyp_table(site, L);
  }
  if (name == "weyl") return weyl_table(site, L);
  throw CLI::ValidationError("--family", "unknown family " + name);
}

int run_verify(const Common& c, const std::string& family) {
  const Site site = parse_site(c.site);
  CrossedGroupTable G = build_family(family, site, c.max_level);
  VerifyOptions opts;
  opts.threads = c.threads;
  VerifyReport rep = verify_crossed_axioms(G, opts);
  if (c.json)
    emit(c, verify_report_to_json(rep).dump(2));
  else
    emit(c, "verify " + family + " on " + site_name(site) + " @" + std::to_string(c.max_level) +
                ": " + rep.summary());
  return rep.ok ? 0 : 1;
}

int run_weyl(const Common& c, int level, bool dump) {
  const Site site = parse_site(c.site);
  const int cap = c.probe_cap < 0 ? level + 2 : c.probe_cap;
  const auto elems = weyl_level_elements(site, level, cap);
  if (c.json) {
    Json j;
    j["schema_version"] = 1;
    j["site"] = site_name(site);
    j["level"] = level;
    j["probe_cap"] = cap;
    j["order"] = elems.size();
    if (dump) {
      Json es = Json::array();
      for (const auto& e : elems) {
        Json one;
        one["perm"] = e.perm;
        one["signs"] = e.signs;
        es.push_back(one);
      }
      j["elements"] = es;
    }
    emit(c, j.dump(2));
  } else {
    emit(c, "|W_" + site_name(site) + "(" + std::to_string(level) +
                ")| = " + std::to_string(elems.size()) + " (probe cap " + std::to_string(cap) +
                ")");
  }
  return 0;
}

int run_classify(const Common& c, int table) {
  const int L = c.max_level > 4 ? 4 : c.max_level;
  TableReport rep = reproduce_table(table, table == 1 ? std::min(L, 3) : L);
  if (c.json)
    emit(c, table_report_to_json(rep).dump(2));
  else {
    std::ostringstream os;
    os << "table " << table << " @" << rep.max_level << ": " << rep.families_found
       << " families, " << (rep.ok ? "all rows matched" : "MISMATCH " + rep.detail);
    for (const auto& r : rep.rows) {
      os << "\n  " << (r.matched ? "ok   " : "FAIL ") << (r.name.empty() ? "?" : r.name) << " [";
      for (size_t i = 0; i < r.found_orders.size(); ++i)
        os << (i ? "," : "") << r.found_orders[i];
      os << "]";
      if (!r.quadruple.empty()) os << " " << r.quadruple;
    }
    emit(c, os.str());
  }
  return rep.ok ? 0 : 1;
}

int run_goursat(const Common& c) {
  const int L = std::min(c.max_level, 4);
  IntervalGoursatAnalysis A = analyze_interval_quadruples(L);
  const bool ok = A.quadruples.size() == 8 && A.closed_count == 6;
  if (c.json)
    emit(c, goursat_analysis_to_json(A).dump(2));
  else {
    std::ostringstream os;
    os << "j*W_nabla = W_augdelta x C2: " << A.quadruples.size() << " candidate quadruples, "
       << A.closed_count << " closed under nabla restriction";
    for (const auto& q : A.quadruples) {
      os << "\n  " << q.label << (q.nabla_closed ? "" : "  FAILS: " + q.witness) << " orders [";
      const auto ords = q.family.orders();
      for (size_t i = 0; i < ords.size(); ++i) os << (i ? "," : "") << ords[i];
      os << "]";
    }
    emit(c, os.str());
  }
  return ok ? 0 : 1;
}

SlicedObject build_sliced(const std::string& name, const CrossedGroupTable& W,
                          std::vector<CrossedGroupTable>& keep,
                          std::vector<CrossedGroupMap>& keep_maps) {
  if (name == "unit") return unit_sliced(W);
  if (name == "group") return group_as_sliced(W);
  if (name.rfind("representable:", 0) == 0) {
    const int a0 = std::stoi(name.substr(14));
    if (a0 < 0 || a0 > W.max_level)
      throw CLI::ValidationError("--x/--y", "representable level out of range");
    return representable_sliced(W, a0, W.lvl[a0].unit);
  }
  if (name == "sym" || name == "hyp") {
    keep.push_back(name == "sym" ? sym_table(W.site, W.max_level)
                                 : hyp_table(W.site, W.max_level));
    keep_maps.push_back(canonical_map(keep.back(), W));
    return sliced_from_map(keep_maps.back());
  }
  throw CLI::ValidationError("--x/--y", "unknown sliced object " + name);
}

int run_rtimes(const Common& c, const std::string& xn, const std::string& yn) {
  const Site site = parse_site(c.site);
  // product tables grow multiplicatively; keep the demo truncation small
  const int L = std::min(c.max_level, 3);
  CrossedGroupTable W = weyl_table(site, L);
  std::vector<CrossedGroupTable> keep;
  std::vector<CrossedGroupMap> keep_maps;
  keep.reserve(4);
  keep_maps.reserve(4);
  SlicedObject X = build_sliced(xn, W, keep, keep_maps);
  SlicedObject Y = build_sliced(yn, W, keep, keep_maps);
  SlicedObject P = rtimes(X, Y);
  std::string why;
  const bool valid = verify_sliced(P, &why);
  // strict unit laws
  SlicedObject U = unit_sliced(W);
  const bool unitl = presheaves_equal(rtimes(U, X).X, X.X) && rtimes(U, X).p == X.p;
  const bool unitr = presheaves_equal(rtimes(X, U).X, X.X) && rtimes(X, U).p == X.p;
  if (c.json) {
    Json j;
    j["schema_version"] = 1;
    j["site"] = site_name(site);
    j["x"] = xn;
    j["y"] = yn;
    j["sizes"] = P.X.size;
    j["valid_sliced_object"] = valid;
    j["unit_laws"] = unitl && unitr;
    emit(c, j.dump(2));
  } else {
    std::ostringstream os;
    os << xn << " x " << yn << " over W_" << site_name(site) << ": sizes [";
    for (size_t i = 0; i < P.X.size.size(); ++i) os << (i ? "," : "") << P.X.size[i];
    os << "] " << (valid ? "valid" : "INVALID: " + why)
       << (unitl && unitr ? ", unit laws hold" : ", UNIT LAW FAILURE");
    emit(c, os.str());
  }
  return (valid && unitl && unitr) ? 0 : 1;
}

int run_free_monoid(const Common& c, const std::string& xn) {
  const Site site = parse_site(c.site);
  const int L = std::min(c.max_level, 3);
  CrossedGroupTable W = weyl_table(site, L);
  std::vector<CrossedGroupTable> keep;
  std::vector<CrossedGroupMap> keep_maps;
  SlicedObject X = build_sliced(xn, W, keep, keep_maps);
  FreeCrossedMonoid F{&X, c.word_cap};
  Json j;
  j["schema_version"] = 1;
  j["site"] = site_name(site);
  j["x"] = xn;
  j["cap"] = c.word_cap;
  Json counts = Json::array();
  for (int a = 0; a <= L; ++a) counts.push_back(F.count_words(a));
  j["word_counts"] = counts;
  if (c.json)
    emit(c, j.dump(2));
  else {
    std::ostringstream os;
    os << "free crossed monoid on " << xn << " (cap " << c.word_cap << "): word counts [";
    for (int a = 0; a <= L; ++a) os << (a ? "," : "") << F.count_words(a);
    os << "]";
    emit(c, os.str());
  }
  return 0;
}

int run_base_change(const Common& c, const std::string& functor, const std::string& direction,
                    const std::string& input) {
  const int L = std::min(c.max_level, 4);
  Json j;
  j["schema_version"] = 1;
  j["functor"] = functor;
  j["direction"] = direction;
  bool ok = true;
  std::ostringstream text;
  if (functor == "j" && direction == "ran") {
    CrossedGroupTable WD = weyl_table(Site::Delta, L - 1);
    CrossedGroupTable ranW = ran_j_crossed(WD);
    CrossedGroupTable WA = weyl_table(Site::AugDelta, L);
    std::string why;
    ok = tables_equal(ranW, WA, {}, &why);
    j["check"] = "ran_j(W_Delta) == W_AugDelta";
    j["ok"] = ok;
    text << "ran_j(W_Delta) == W_AugDelta @" << L << ": " << (ok ? "yes" : "NO (" + why + ")");
  } else if (functor == "j" && direction == "lan") {
    CrossedGroupTable WD = weyl_table(Site::Delta, L - 1);
    CrossedGroupMap idm = identity_map(WD);
    MonoidTable M = crossed_group_as_monoid(idm);
    Pi0Monoid p0 = pi0_monoid(M);
    ok = p0.well_defined;
    j["check"] = "pi0(W_Delta) monoid well-defined";
    j["pi0_size"] = p0.size;
    j["ok"] = ok;
    text << "pi0(W_Delta as monoid): " << p0.size << " classes, "
         << (ok ? "well-defined" : "NOT WELL-DEFINED");
  } else if (functor == "J" && direction == "ran") {
    // the source lives two levels up, so keep the output truncation small
    const int Lr = std::min(L, 2);
    CrossedGroupTable Wbig = weyl_table(Site::Nabla, Lr + 2);
    CrossedGroupTable JW = restrict_crossed(functor_J(), Wbig, Lr + 2);
    CrossedGroupTable Wn = weyl_table(Site::Nabla, Lr);
    CrossedGroupMap idm = identity_map(JW);
    MonoidTable M = crossed_group_as_monoid(idm);
    RanInterval R = ran_interval_monoid(M, theta_from_structure(M), Wn);
    std::string why;
    ok = verify_monoid(R.monoid, &why);
    for (int n = 0; n <= Lr && ok; ++n)
      if (R.monoid.X.X.size[n] != Wn.order(n)) {
        ok = false;
        why = "size mismatch at level " + std::to_string(n);
      }
    j["check"] = "J_sharp(W_AugDelta x C2) == W_Nabla";
    j["max_level"] = Lr;
    j["sizes"] = R.monoid.X.X.size;
    j["ok"] = ok;
    text << "J_sharp(J*W_Nabla) = W_Nabla @" << Lr << ": " << (ok ? "yes" : "NO (" + why + ")");
  } else if (functor == "J" && direction == "lan") {
    PresheafTable X =
        input.empty() ? terminal_presheaf(Site::AugDelta, L) : [&] {
          std::ifstream in(input);
          Json jj;
          in >> jj;
          PresheafTable P;  // minimal reader: sizes + restriction rows
          P.site = *site_from_name(jj.at("site").get<std::string>());
          P.max_level = jj.at("max_level").get<int>();
          P.size = jj.at("sizes").get<std::vector<int32_t>>();
          P.init_offsets();
          for (int a = 0; a <= P.max_level; ++a)
            P.rest[a].resize(static_cast<size_t>(P.hom_total(a)) * P.size[a]);
          for (const auto& row : jj.at("restriction")) {
            const int a = row.at("cod").get<int>(), b = row.at("dom").get<int>();
            const int32_t p = row.at("phi").get<int32_t>();
            const auto vals = row.at("values").get<std::vector<int32_t>>();
            for (int32_t x = 0; x < P.size[a]; ++x)
              P.rest[a][(static_cast<size_t>(P.hoff[a][b]) + p) * P.size[a] + x] = vals[x];
          }
          return P;
        }();
    LanInterval Li = lan_interval(X, L);
    std::string why;
    ok = verify_presheaf(Li.table, &why);
    j["check"] = "J_!(X) is a Nabla presheaf";
    j["sizes"] = Li.table.size;
    j["ok"] = ok;
    text << "J_!(" << (input.empty() ? "terminal" : input) << ") sizes [";
    for (size_t i = 0; i < Li.table.size.size(); ++i)
      text << (i ? "," : "") << Li.table.size[i];
    text << "] " << (ok ? "valid" : "INVALID: " + why);
  } else {
    throw CLI::ValidationError("--functor/--direction", "use --functor j|J --direction lan|ran");
  }
  if (c.json)
    emit(c, j.dump(2));
  else
    emit(c, text.str());
  return ok ? 0 : 1;
}

int run_dump(const Common& c, const std::string& family) {
  const Site site = parse_site(c.site);
  CrossedGroupTable G = build_family(family, site, c.max_level);
  emit(c, crossed_group_to_json(G).dump(2));
  return 0;
}

int run_subgroup_gen(const Common& c, const std::string& family, const std::string& gens) {
  const Site site = parse_site(c.site);
  CrossedGroupTable G = build_family(family, site, c.max_level);
  std::vector<TaggedElement> seed;
  std::stringstream ss(gens);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--gen", "expected level:index pairs");
    seed.push_back({std::stoi(item.substr(0, colon)),
                    static_cast<int32_t>(std::stoi(item.substr(colon + 1)))});
  }
  SubgroupFamily F = generated_subgroup(G, seed);
  if (c.json) {
    Json j;
    j["schema_version"] = 1;
    j["site"] = site_name(site);
    j["family"] = family;
    j["generated"] = family_to_json(F);
    emit(c, j.dump(2));
  } else {
    std::ostringstream os;
    os << "generated subgroup orders [";
    const auto ords = F.orders();
    for (size_t i = 0; i < ords.size(); ++i) os << (i ? "," : "") << ords[i];
    os << "]";
    emit(c, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crossed groups over the finite sites: axiom checks, Weyl groups, classification"};
  app.require_subcommand(1);

  int default_level = 5;
  if (const char* env = std::getenv("CROSSED_SITE_MAX_LEVEL")) default_level = std::atoi(env);

  Common c;
  c.max_level = default_level;
  std::string family = "weyl", xn = "group", yn = "group", direction = "ran", functor = "j";
  std::string gens, input;
  int level = 2, table = 2;
  bool dump = false;

  auto* verify = app.add_subcommand("verify", "run the crossed-group axiom suite");
  verify->add_option("--family", family, "trivial|sym|cyc|dihedral|hyp|weyl")
      ->capture_default_str();
  add_common(verify, c);

  auto* weyl = app.add_subcommand("weyl", "enumerate a Weyl group level");
  weyl->add_option("--level", level, "level n")->capture_default_str();
  weyl->add_flag("--dump", dump, "include the element list");
  add_common(weyl, c);

  auto* classify = app.add_subcommand("classify", "reproduce a classification table");
  classify->add_option("--table", table, "1, 2 or 3")->capture_default_str();
  add_common(classify, c, false);

  auto* goursat = app.add_subcommand("goursat", "quadruple analysis over j*W_nabla");
  add_common(goursat, c, false);

  auto* rt = app.add_subcommand("rtimes", "semidirect monoidal product of sliced objects");
  rt->add_option("--x", xn, "unit|group|sym|hyp|representable:k")->capture_default_str();
  rt->add_option("--y", yn, "unit|group|sym|hyp|representable:k")->capture_default_str();
  add_common(rt, c);

  auto* fm = app.add_subcommand("free-monoid", "free crossed monoid word counts");
  fm->add_option("--x", xn, "generating sliced object")->capture_default_str();
  fm->add_option("--cap", c.word_cap, "word length cap")->capture_default_str();
  add_common(fm, c);

  auto* bc = app.add_subcommand("base-change", "Kan extensions along j and J");
  bc->add_option("--functor", functor, "j | J")->capture_default_str();
  bc->add_option("--direction", direction, "lan | ran")->capture_default_str();
  bc->add_option("--input", input, "presheaf JSON file for J lan");
  add_common(bc, c, false);

  auto* dump_cmd = app.add_subcommand("dump", "emit a family's full crossed-group table as JSON");
  dump_cmd->add_option("--family", family, "trivial|sym|cyc|dihedral|hyp|weyl")
      ->capture_default_str();
  add_common(dump_cmd, c);

  auto* sg = app.add_subcommand("subgroup-gen", "closure of tagged generators");
  sg->add_option("--family", family, "ambient family")->capture_default_str();
  sg->add_option("--gen", gens, "comma-separated level:index pairs")->required();
  add_common(sg, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(c, family);
    if (weyl->parsed()) return run_weyl(c, level, dump);
    if (classify->parsed()) return run_classify(c, table);
    if (goursat->parsed()) return run_goursat(c);
    if (rt->parsed()) return run_rtimes(c, xn, yn);
    if (fm->parsed()) return run_free_monoid(c, xn);
    if (bc->parsed()) return run_base_change(c, functor, direction, input);
    if (dump_cmd->parsed()) return run_dump(c, family);
    if (sg->parsed()) return run_subgroup_gen(c, family, gens);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
