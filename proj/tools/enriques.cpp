// Command-line front end: parse polynomials and diagram/cluster files,
// dispatch the library operations, emit JSON/CSV/text with stable bytes.
//
// Exit codes: 0 success, 1 domain validation failure, 2 parse/format error,
// 3 field extension required, 4 resource cap hit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "enriques/cli_verbs.hpp"
#include "enriques/json_io.hpp"

using namespace enriques;

namespace {

struct Io {
  std::string out_path;
  std::string format = "json";

  void emit_json(const Json& j) const {
    std::string bytes = j.dump(2) + "\n";
    write(bytes);
  }
  void emit_text(const std::string& s) const { write(s + "\n"); }
  void write(const std::string& bytes) const {
    if (out_path.empty() || out_path == "-") {
      std::cout << bytes;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      require(f.good(), Errc::FormatError, "cannot open output file " + out_path);
      f << bytes;
    }
  }
};

std::string read_input(const std::string& path_or_dash) {
  if (path_or_dash == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path_or_dash);
  require(f.good(), Errc::FormatError, "cannot open " + path_or_dash);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_input(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::FormatError, "bad JSON in " + path + ": " + e.what());
  }
}

std::vector<long> parse_longs(const std::string& csv) {
  std::vector<long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stol(item));
  require(!out.empty(), Errc::UsageError, "empty integer list '" + csv + "'");
  return out;
}

// Common inline-diagram options: a file, a named family, or bare roots.
struct DiagramArgs {
  std::string file;
  std::string family;  // "M" or "N"
  long p = 0, m = 0;
  std::string all_roots;
  std::string weights;

  void attach(CLI::App* cmd) {
    cmd->add_option("--diagram", file, "diagram JSON file (- for stdin)");
    cmd->add_option("--family", family, "inline family: M or N")
        ->check(CLI::IsMember({"M", "N"}));
    cmd->add_option("--p", p, "prime parameter of the M family");
    cmd->add_option("--m", m, "weight parameter of the M/N family");
    cmd->add_option("--all-roots", all_roots, "inline diagram: disjoint roots, weights a,b,...");
    cmd->add_option("--weights", weights, "override/provide weights w0,w1,...");
  }

  bool provided() const { return !file.empty() || !family.empty() || !all_roots.empty(); }

  DiagramFile load() const {
    require(provided(), Errc::UsageError,
            "one of --diagram, --family, --all-roots is required");
    DiagramFile out;
    if (!file.empty()) {
      out = diagram_from_json(load_json(file));
    } else if (family == "M") {
      auto fam = build_family(FamilyKind::M, p, m);
      out.base = fam.diagram.base;
      out.weights = fam.diagram.weight;
    } else if (family == "N") {
      auto fam = build_family(FamilyKind::N, 0, m);
      out.base = fam.diagram.base;
      out.weights = fam.diagram.weight;
    } else {
      auto fam = build_family(FamilyKind::AllRoots, 0, 0, parse_longs(all_roots));
      out.base = fam.diagram.base;
      out.weights = fam.diagram.weight;
    }
    if (!weights.empty()) {
      out.weights = parse_longs(weights);
      require((int)out.weights.size() == out.base.size(), Errc::UsageError,
              "--weights arity differs from the vertex count");
    }
    return out;
  }
};

std::pair<Scalar, Scalar> parse_point(const std::string& s, const FieldSpec& fs) {
  auto comma = s.find(',');
  require(comma != std::string::npos, Errc::UsageError, "point must look like a,b");
  mpq_class a, b;
  require(mpq_set_str(a.get_mpq_t(), s.substr(0, comma).c_str(), 10) == 0 &&
              mpq_set_str(b.get_mpq_t(), s.substr(comma + 1).c_str(), 10) == 0,
          Errc::UsageError, "bad point literal '" + s + "'");
  a.canonicalize();
  b.canonicalize();
  return {Scalar::of_mpq(fs, a), Scalar::of_mpq(fs, b)};
}

RealizationParams params_from_json(const Json& j, const FieldSpec& fs) {
  RealizationParams out;
  require(j.is_object(), Errc::FormatError, "--params must be a JSON object");
  if (j.contains("roots"))
    for (auto& [key, val] : j["roots"].items()) {
      require(val.is_array() && val.size() == 2, Errc::FormatError,
              "root entries are [a, b] pairs");
      out.roots[std::stoi(key)] = {scalar_from_json(val[0], fs), scalar_from_json(val[1], fs)};
    }
  if (j.contains("free"))
    for (auto& [key, val] : j["free"].items()) {
      if (val.is_string() && val.get<std::string>() == "inf")
        out.free_points[std::stoi(key)] = ProjParam::infinite(fs);
      else
        out.free_points[std::stoi(key)] = ProjParam::finite(scalar_from_json(val, fs));
    }
  return out;
}

WeightedCluster cluster_from_args(const DiagramArgs& dargs, const FieldSpec& fs,
                                  const std::string& params_text) {
  DiagramFile df = dargs.load();
  require(df.weighted(), Errc::UsageError, "weights are required (weight fields or --weights)");
  WeightedDiagram wd = df.as_weighted();
  Ordering th = identity_ordering(wd.size());
  Cluster c;
  if (params_text.empty()) {
    c = realize_standard(wd.base, th, fs);
  } else {
    Json pj;
    try {
      pj = Json::parse(params_text);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::FormatError, std::string("bad --params JSON: ") + e.what());
    }
    c = realize(wd.base, th, params_from_json(pj, fs), fs);
  }
  return weighted_cluster_of(c, wd);
}

std::vector<Family> families_from_spec(const std::string& spec) {
  // "M:2,2;N:3;roots:2,3"
  std::vector<Family> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    require(colon != std::string::npos, Errc::UsageError,
            "family spec entries look like M:p,m or N:m or roots:w1,w2");
    std::string kind = item.substr(0, colon);
    auto nums = parse_longs(item.substr(colon + 1));
    if (kind == "M") {
      require(nums.size() == 2, Errc::UsageError, "M takes p,m");
      out.push_back(build_family(FamilyKind::M, nums[0], nums[1]));
    } else if (kind == "N") {
      require(nums.size() == 1, Errc::UsageError, "N takes m");
      out.push_back(build_family(FamilyKind::N, 0, nums[0]));
    } else if (kind == "roots") {
      out.push_back(build_family(FamilyKind::AllRoots, 0, 0, nums));
    } else {
      fail(Errc::UsageError, "unknown family kind '" + kind + "'");
    }
  }
  require(!out.empty(), Errc::UsageError, "empty family list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations with Enriques diagrams, clusters, and complete ideals"};
  app.require_subcommand(1);

  Io io;
  app.add_option("--out", io.out_path, "output path (default stdout)");
  app.add_option("--format", io.format, "json, text, or csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));

  std::string field_str = "Q";
  std::string poly_text;
  std::string at_point;
  bool all_points = false;
  std::string params_text;
  bool list_orderings = false;
  bool minimal = false;
  int root_vertex = 0;
  int degree_cap = 64;
  std::string gens_text, points_text, mults_text, primes_text, families_text, ideal_file,
      diagram2_file;
  DiagramArgs dargs;

  auto* v_validate = app.add_subcommand("validate", "check the diagram laws");
  v_validate->add_flag("--minimal", minimal, "also require the Law of Minimality");
  auto* v_chars = app.add_subcommand("chars", "numerical characters dim/deg/cod");
  auto* v_matrix = app.add_subcommand("matrix", "proximity matrix of the array ordering");
  auto* v_orderings = app.add_subcommand("orderings", "count or list the orderings");
  v_orderings->add_flag("--list", list_orderings, "list instead of count");
  auto* v_aut = app.add_subcommand("aut", "automorphisms (weight-preserving when weighted)");
  auto* v_eset = app.add_subcommand("eset", "compare effective-divisor sets via matrices");
  v_eset->add_option("--diagram2", diagram2_file, "second diagram JSON file")->required();
  auto* v_blowup = app.add_subcommand("blowup", "diagram transforms at a root");
  v_blowup->add_option("--root", root_vertex, "root vertex id (default 0)");
  auto* v_prune = app.add_subcommand("prune", "remove free weight-1 leaves");
  auto* v_family = app.add_subcommand("family", "emit a named family diagram");
  auto* v_realize = app.add_subcommand("realize", "realize a diagram as a cluster");
  auto* v_cldia = app.add_subcommand("cluster-diagram", "diagram of a realized cluster");
  auto* v_ideal = app.add_subcommand("ideal", "truncated complete ideal of a cluster");
  auto* v_colength = app.add_subcommand("colength", "colength of an ideal file");
  v_colength->add_option("--ideal", ideal_file, "ideal JSON file")->required();
  auto* v_enriques = app.add_subcommand("enriques", "colength vs the degree formula");
  auto* v_ideal_dia = app.add_subcommand("ideal-diagram", "recover the diagram of an ideal");
  v_ideal_dia->add_option("--gens", gens_text, "generators, ';'-separated")->required();
  auto* v_prod = app.add_subcommand("product-ideal", "product of powers of point ideals");
  v_prod->add_option("--points", points_text, "points a,b;c,d;...")->required();
  v_prod->add_option("--mults", mults_text, "multiplicities m1,m2,...")->required();
  auto* v_curve = app.add_subcommand("curve", "minimal diagram of a plane curve");
  auto* v_cross = app.add_subcommand("crosscheck", "independent check of the blowup transforms");
  auto* v_ramify = app.add_subcommand("ramify", "kernel of the tangent map to the Hilbert scheme");
  auto* v_scan = app.add_subcommand("scan", "kernel dimensions across characteristics");
  v_scan->add_option("--families", families_text, "e.g. M:2,2;N:3;roots:2,3")->required();
  v_scan->add_option("--primes", primes_text, "primes 2,3,5,...")->required();

  for (auto* cmd : {v_validate, v_chars, v_matrix, v_orderings, v_aut, v_eset, v_blowup, v_prune,
                    v_family, v_realize, v_cldia, v_ideal, v_enriques, v_ramify})
    dargs.attach(cmd);
  for (auto* cmd : {v_realize, v_cldia, v_ideal, v_enriques, v_ramify})
    cmd->add_option("--params", params_text,
                    "JSON {\"roots\":{\"0\":[\"a\",\"b\"]},\"free\":{\"1\":\"t\"|\"inf\"}}; "
                    "standard placement when absent");
  for (auto* cmd :
       {v_validate, v_chars, v_matrix, v_orderings, v_aut, v_eset, v_blowup, v_prune, v_family,
        v_realize, v_cldia, v_ideal, v_colength, v_enriques, v_ideal_dia, v_prod, v_curve,
        v_cross, v_ramify, v_scan}) {
    cmd->add_option("--field", field_str, "field spec: Q, F2, F3, ..., suffix [e] for duals");
    cmd->add_option("--degree-cap", degree_cap, "cap for truncation bounds (default 64)");
  }
  for (auto* cmd : {v_curve, v_cross}) {
    cmd->add_option("--poly", poly_text, "curve polynomial (or - for stdin)")->required();
    cmd->add_option("--at", at_point, "base point a,b");
    cmd->add_flag("--all", all_points, "analyze all rational singular points");
  }
  for (auto* cmd : app.get_subcommands(nullptr)) cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    Json err{{"error", Json{{"code", "UsageError"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 2;
  }

  try {
    FieldSpec fs = FieldSpec::parse(field_str);
    auto poly_of = [&](const std::string& text) {
      std::string body = text == "-" ? read_input("-") : text;
      while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
      return parse_polynomial(body, fs);
    };

    if (*v_validate) {
      DiagramFile df = dargs.load();
      ValidationReport rep =
          df.weighted() ? validate(df.as_weighted(), minimal) : validate(df.base);
      io.emit_json(validation_to_json(rep));
      return rep.ok() ? 0 : 1;
    }
    if (*v_chars) {
      auto c = characters(dargs.load().as_weighted());
      if (io.format == "text")
        io.emit_text(characters_to_text(c));
      else
        io.emit_json(characters_to_json(c));
      return 0;
    }
    if (*v_matrix) {
      DiagramFile df = dargs.load();
      io.emit_json(intmat_to_json(proximity_matrix(df.base, identity_ordering(df.base.size()))));
      return 0;
    }
    if (*v_orderings) {
      DiagramFile df = dargs.load();
      if (list_orderings) {
        Json out = Json::array();
        for (auto& th : orderings_list(df.base)) out.push_back(th);
        io.emit_json(out);
      } else {
        io.emit_json(Json{{"count", orderings_count(df.base).get_str()}});
      }
      return 0;
    }
    if (*v_aut) {
      DiagramFile df = dargs.load();
      auto auts = df.weighted() ? automorphisms(df.as_weighted()) : automorphisms(df.base);
      Json out = Json::array();
      for (auto& g : auts) out.push_back(g);
      io.emit_json(Json{{"order", auts.size()}, {"permutations", out}});
      return 0;
    }
    if (*v_eset) {
      DiagramFile a = dargs.load();
      DiagramFile b = diagram_from_json(load_json(diagram2_file));
      auto rel = eset_relation(a.base, identity_ordering(a.base.size()), b.base,
                               identity_ordering(b.base.size()));
      io.emit_json(eset_to_json(rel));
      return 0;
    }
    if (*v_blowup) {
      io.emit_json(blowup_to_json(blowup_at_root(dargs.load().as_weighted(), root_vertex)));
      return 0;
    }
    if (*v_prune) {
      io.emit_json(diagram_to_json(prune_to_minimal(dargs.load().as_weighted())));
      return 0;
    }
    if (*v_family) {
      DiagramFile df = dargs.load();
      io.emit_json(diagram_to_json(WeightedDiagram{df.base, df.weights}));
      return 0;
    }
    if (*v_realize) {
      auto wc = cluster_from_args(dargs, fs, params_text);
      io.emit_json(cluster_to_json(wc.cluster));
      return 0;
    }
    if (*v_cldia) {
      auto wc = cluster_from_args(dargs, fs, params_text);
      auto [d, th] = diagram_of_cluster(wc.cluster);
      io.emit_json(diagram_to_json(WeightedDiagram{d, wc.weights}));
      return 0;
    }
    if (*v_ideal) {
      auto wc = cluster_from_args(dargs, fs, params_text);
      io.emit_json(ideal_to_json(complete_ideal(wc, degree_cap)));
      return 0;
    }
    if (*v_colength) {
      auto ideal = ideal_from_json(load_json(ideal_file));
      if (io.format == "text")
        io.emit_text(std::to_string(colength(ideal)));
      else
        io.emit_json(Json{{"colength", colength(ideal)}});
      return 0;
    }
    if (*v_enriques) {
      auto wc = cluster_from_args(dargs, fs, params_text);
      io.emit_json(enriques_to_json(enriques_check(wc, degree_cap)));
      return 0;
    }
    if (*v_ideal_dia) {
      std::vector<BiPoly> gens;
      std::stringstream ss(gens_text);
      std::string item;
      while (std::getline(ss, item, ';'))
        if (!item.empty()) gens.push_back(parse_polynomial(item, fs));
      auto res = diagram_of_ideal(gens, fs, degree_cap);
      io.emit_json(Json{{"diagram", diagram_to_json(res.diagram)},
                        {"cluster", cluster_to_json(res.cluster.cluster)},
                        {"colength", res.colength}});
      return 0;
    }
    if (*v_prod) {
      std::vector<std::pair<Scalar, Scalar>> pts;
      std::stringstream ss(points_text);
      std::string item;
      while (std::getline(ss, item, ';'))
        if (!item.empty()) pts.push_back(parse_point(item, fs));
      io.emit_json(ideal_to_json(product_ideal(pts, parse_longs(mults_text), fs, degree_cap)));
      return 0;
    }
    if (*v_curve) {
      CurveInput input{poly_of(poly_text), fs, std::nullopt};
      if (!at_point.empty()) input.base_point = parse_point(at_point, fs);
      io.emit_json(curve_result_to_json(curve_diagram(input, degree_cap)));
      return 0;
    }
    if (*v_cross) {
      auto pt = at_point.empty() ? std::make_pair(Scalar::zero(fs), Scalar::zero(fs))
                                 : parse_point(at_point, fs);
      auto rep = blowup_cross_check({poly_of(poly_text), fs, pt}, pt, degree_cap);
      io.emit_json(crosscheck_to_json(rep));
      return 0;
    }
    if (*v_ramify) {
      auto wc = cluster_from_args(dargs, fs, params_text);
      auto rep = differential_kernel(wc, degree_cap);
      if (io.format == "text")
        io.emit_text("kernel_dim " + std::to_string(rep.kernel_dim));
      else
        io.emit_json(differential_to_json(rep));
      return 0;
    }
    if (*v_scan) {
      auto table = inseparability_scan(families_from_spec(families_text),
                                       parse_longs(primes_text), degree_cap);
      if (io.format == "csv")
        io.write(scan_to_csv(table));
      else
        io.emit_json(scan_to_json(table));
      return 0;
    }
    fail(Errc::UsageError, "no subcommand dispatched");
  } catch (const Error& e) {
    std::cerr << error_to_json(e).dump(2) << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    Json err{{"error", Json{{"code", "Internal"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}
