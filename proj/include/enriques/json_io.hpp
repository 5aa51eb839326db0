#pragma once

#include <json.hpp>

#include "enriques/curve.hpp"
#include "enriques/ramification.hpp"

namespace enriques {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Scalars: plain strings over a base field, value/deriv pairs over K[e].

inline Json scalar_to_json(const Scalar& s) {
  if (!s.spec().dual) return s.value().get_str();
  return Json{{"value", s.value().get_str()}, {"deriv", s.deriv().get_str()}};
}

inline Scalar scalar_from_json(const Json& j, const FieldSpec& fs) {
  require(j.is_string(), Errc::FormatError, "scalar must be a string like \"3/2\"");
  mpq_class v;
  if (mpq_set_str(v.get_mpq_t(), j.get<std::string>().c_str(), 10) != 0)
    fail(Errc::FormatError, "bad scalar literal '" + j.get<std::string>() + "'");
  v.canonicalize();
  return Scalar::of_mpq(fs, v);
}

// ---------------------------------------------------------------------------
// Diagrams: array index = id = ordering position.

inline Json diagram_to_json(const UnweightedDiagram& d, const std::vector<long>* weights) {
  const UnweightedDiagram* src = &d;
  UnweightedDiagram relabeled;
  std::vector<long> wre;
  if (!is_ordering(d, identity_ordering(d.size()))) {
    // serialization fixes array order = an ordering; relabel canonically
    auto ths = orderings_list(d);
    relabeled = relabel(d, ths[0]);
    src = &relabeled;
    if (weights) {
      wre.resize(d.size());
      for (int v = 0; v < d.size(); ++v) wre[ths[0][v]] = (*weights)[v];
      weights = &wre;
    }
  }
  Json verts = Json::array();
  for (int v = 0; v < src->size(); ++v) {
    Json item;
    item["id"] = v;
    item["parent"] = src->parent[v] ? Json(*src->parent[v]) : Json(nullptr);
    item["prox"] = src->prox[v];
    if (weights) item["weight"] = (*weights)[v];
    verts.push_back(item);
  }
  return Json{{"vertices", verts}};
}

inline Json diagram_to_json(const WeightedDiagram& d) {
  return diagram_to_json(d.base, &d.weight);
}

inline Json diagram_to_json(const UnweightedDiagram& d) { return diagram_to_json(d, nullptr); }

struct DiagramFile {
  UnweightedDiagram base;
  std::vector<long> weights;  // empty when unweighted
  bool weighted() const { return !weights.empty(); }
  WeightedDiagram as_weighted() const {
    require(weighted(), Errc::FormatError, "diagram file carries no weights");
    return WeightedDiagram{base, weights};
  }
};

inline DiagramFile diagram_from_json(const Json& j) {
  require(j.is_object() && j.contains("vertices") && j["vertices"].is_array(), Errc::FormatError,
          "diagram JSON must be {\"vertices\": [...]}");
  DiagramFile out;
  int n = (int)j["vertices"].size();
  int weighted_count = 0;
  for (int v = 0; v < n; ++v) {
    const Json& item = j["vertices"][v];
    require(item.is_object(), Errc::FormatError, "vertex entries must be objects");
    if (item.contains("id"))
      require(item["id"].is_number_integer() && item["id"].get<int>() == v, Errc::FormatError,
              "vertex ids must equal the array positions");
    std::optional<int> parent;
    if (item.contains("parent") && !item["parent"].is_null()) {
      require(item["parent"].is_number_integer(), Errc::FormatError, "parent must be an id");
      int p = item["parent"].get<int>();
      require(p >= 0 && p < v, Errc::FormatError,
              "array order must be an ordering: parent of " + std::to_string(v) +
                  " does not precede it");
      parent = p;
    }
    std::vector<int> prox;
    if (item.contains("prox")) {
      require(item["prox"].is_array(), Errc::FormatError, "prox must be an array of ids");
      for (auto& t : item["prox"]) {
        int u = t.get<int>();
        require(u >= 0 && u < v, Errc::FormatError,
                "array order must be an ordering: proximity " + std::to_string(v) + " > " +
                    std::to_string(u) + " points forward");
        prox.push_back(u);
      }
    }
    out.base.add_vertex(parent, prox);
    if (item.contains("weight")) {
      ++weighted_count;
      out.weights.push_back(item["weight"].get<long>());
    }
  }
  require(weighted_count == 0 || weighted_count == n, Errc::FormatError,
          "either every vertex carries a weight or none does");
  return out;
}

// ---------------------------------------------------------------------------
// Clusters.

inline Json cluster_to_json(const Cluster& c) {
  Json pts = Json::array();
  for (auto& p : c.points) {
    Json item;
    item["parent"] = p.parent_point ? Json(*p.parent_point) : Json(nullptr);
    item["chart"] = chart_name(p.chart);
    if (p.chart == ChartKind::Origin)
      item["coords"] = Json::array({scalar_to_json(p.root_a), scalar_to_json(p.root_b)});
    else
      item["param"] = Json::array({scalar_to_json(p.param.l0), scalar_to_json(p.param.l1)});
    item["prox"] = p.prox;
    pts.push_back(item);
  }
  return Json{{"field", c.field.str()}, {"points", pts}};
}

// ---------------------------------------------------------------------------
// Ideals.

inline Json poly_to_json_terms(const BiPoly& f) {
  Json terms = Json::array();
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it)
    terms.push_back(Json{{"dx", it->first.dx}, {"dy", it->first.dy},
                         {"c", scalar_to_json(it->second)}});
  return terms;
}

inline Json ideal_to_json(const TruncatedIdeal& ideal) {
  Json j;
  j["field"] = ideal.field.str();
  j["N"] = ideal.degree_bound;
  j["colength"] = ideal.colength;
  j["stabilized"] = ideal.stabilized;
  Json basis = Json::array();
  bool monomial = true;
  for (auto& f : ideal.basis) {
    basis.push_back(poly_to_json_terms(f));
    if (f.term_count() != 1) monomial = false;
  }
  j["basis"] = basis;
  if (monomial && !ideal.basis.empty()) {
    // minimal monomial generators under divisibility
    std::vector<Exp> exps;
    for (auto& f : ideal.basis) exps.push_back(f.terms().begin()->first);
    Json stairs = Json::array();
    for (auto& e : exps) {
      bool minimal = true;
      for (auto& o : exps)
        if (!(o == e) && o.dx <= e.dx && o.dy <= e.dy) minimal = false;
      if (minimal)
        stairs.push_back(poly_to_string(
            BiPoly::monomial(ideal.field, e.dx, e.dy, Scalar::one(ideal.field))));
    }
    j["staircase"] = stairs;
  }
  return j;
}

inline TruncatedIdeal ideal_from_json(const Json& j) {
  require(j.is_object() && j.contains("field") && j.contains("N") && j.contains("basis"),
          Errc::FormatError, "ideal JSON must carry field, N, and basis");
  TruncatedIdeal out;
  out.field = FieldSpec::parse(j["field"].get<std::string>());
  require(!out.field.dual, Errc::FormatError, "ideal files are written over base fields");
  out.degree_bound = j["N"].get<int>();
  out.colength = j.value("colength", 0L);
  out.stabilized = j.value("stabilized", false);
  for (auto& terms : j["basis"]) {
    BiPoly f(out.field);
    for (auto& t : terms)
      f.add_term({t["dx"].get<int>(), t["dy"].get<int>()}, scalar_from_json(t["c"], out.field));
    out.basis.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports.

inline Json validation_to_json(const ValidationReport& rep) {
  Json items = Json::array();
  for (auto& v : rep.items)
    items.push_back(Json{{"law", v.law}, {"vertices", v.vertices}, {"detail", v.detail}});
  return Json{{"ok", rep.ok()}, {"violations", items}};
}

inline Json characters_to_json(const Characters& c) {
  return Json{{"dim", c.dim}, {"deg", c.deg}, {"cod", c.cod}, {"type", c.type_of}};
}

inline std::string characters_to_text(const Characters& c) {
  return "dim=" + std::to_string(c.dim) + " deg=" + std::to_string(c.deg) +
         " cod=" + std::to_string(c.cod);
}

inline Json intmat_to_json(const IntMat& m) {
  Json rows = Json::array();
  for (auto& r : m) rows.push_back(r);
  return rows;
}

inline Json eset_to_json(const ESetRelation& r) {
  return Json{{"relation", eset_order_name(r.order)},
              {"q_left", intmat_to_json(r.q_left)},
              {"q_right", intmat_to_json(r.q_right)}};
}

inline Json blowup_to_json(const BlowupResult& b) {
  return Json{{"d_prime", diagram_to_json(b.d_prime)},
              {"d_double_prime", diagram_to_json(b.d_double_prime)},
              {"cod_delta_prime", b.cod_delta_prime},
              {"cod_delta_double", b.cod_delta_double},
              {"ordinary", b.ordinary}};
}

inline Json enriques_to_json(const EnriquesReport& r) {
  return Json{{"colength", r.colength}, {"deg_formula", r.deg_formula}, {"match", r.match}};
}

inline const char* frame_kind_name(TangentFrame::Kind k) {
  switch (k) {
    case TangentFrame::RootX: return "root_x";
    case TangentFrame::RootY: return "root_y";
    case TangentFrame::Slide: return "slide";
  }
  return "?";
}

inline Json differential_to_json(const DifferentialReport& r) {
  Json frame = Json::array();
  for (auto& p : r.frame.params)
    frame.push_back(Json{{"vertex", p.vertex}, {"kind", frame_kind_name(p.kind)}});
  Json base = Json::array();
  for (auto& v : r.kernel_basis) {
    Json vec = Json::array();
    for (auto& s : v) vec.push_back(scalar_to_json(s));
    base.push_back(vec);
  }
  return Json{{"field", r.field.str()}, {"dim", r.dim},          {"rank", r.rank},
              {"kernel_dim", r.kernel_dim}, {"kernel_basis", base}, {"frame", frame}};
}

inline Json crosscheck_to_json(const CrossCheckReport& r) {
  return Json{{"mult", r.mult},
              {"ordinary", r.ordinary},
              {"delta_prime", r.delta_prime},
              {"delta_double", r.delta_double},
              {"match_prime", r.match_prime},
              {"match_double", r.match_double},
              {"identity_prime_ok", r.identity_prime_ok},
              {"identity_double_ok", r.identity_double_ok},
              {"d_at_point", diagram_to_json(r.d_at_p)},
              {"d_prime", diagram_to_json(r.d_prime)},
              {"d_double_prime", diagram_to_json(r.d_double)}};
}

inline Json curve_result_to_json(const CurveDiagramResult& r) {
  return Json{{"diagram", diagram_to_json(r.diagram)},
              {"cluster", cluster_to_json(r.cluster)},
              {"trace", r.trace},
              {"notices", r.notices}};
}

inline Json scan_to_json(const std::vector<ScanRow>& rows) {
  Json out = Json::array();
  for (auto& r : rows)
    out.push_back(Json{{"diagram", r.id},
                       {"p", r.p},
                       {"dim", r.dim},
                       {"sum_m", r.sum_m},
                       {"predicate", r.predicate},
                       {"kernel_dim", r.kernel_dim},
                       {"status", r.status}});
  return out;
}

inline std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::string out = "diagram,p,dim,sum_m,predicate,kernel_dim,status\n";
  for (auto& r : rows)
    out += r.id + "," + std::to_string(r.p) + "," + std::to_string(r.dim) + "," +
           std::to_string(r.sum_m) + "," + (r.predicate ? "true" : "false") + "," +
           std::to_string(r.kernel_dim) + "," + r.status + "\n";
  return out;
}

inline Json error_to_json(const Error& e) {
  return Json{{"error", Json{{"code", errc_name(e.code())},
                             {"message", e.what()},
                             {"data", e.data()}}}};
}

}  // namespace enriques
