#pragma once

#include <array>
#include <string_view>

namespace enriques {

// CLI verb -> library operation.  One verb per operation; the coverage
// test in the CLI suite checks both directions.
struct VerbEntry {
  std::string_view verb;
  std::string_view operation;
};

inline constexpr std::array<VerbEntry, 20> kVerbTable{{
    {"validate", "diagram.validate"},
    {"chars", "diagram.characters"},
    {"matrix", "diagram.proximity_matrix"},
    {"orderings", "diagram.orderings"},
    {"aut", "diagram.automorphisms"},
    {"eset", "transform.eset_relation"},
    {"blowup", "transform.blowup_at_root"},
    {"prune", "transform.prune_to_minimal"},
    {"family", "transform.build_family"},
    {"realize", "cluster.realize"},
    {"cluster-diagram", "cluster.diagram_of_cluster"},
    {"ideal", "ideal.complete_ideal"},
    {"colength", "ideal.colength"},
    {"enriques", "ideal.enriques_check"},
    {"ideal-diagram", "ideal.diagram_of_ideal"},
    {"product-ideal", "ideal.product_ideal"},
    {"curve", "curve.curve_diagram"},
    {"crosscheck", "curve.blowup_cross_check"},
    {"ramify", "ramification.differential_kernel"},
    {"scan", "ramification.inseparability_scan"},
}};

}  // namespace enriques
