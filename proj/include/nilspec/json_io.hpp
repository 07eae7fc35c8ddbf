#pragma once

#include <filesystem>
#include <json.hpp>

#include "nilspec/graph.hpp"
#include "nilspec/intmatrix.hpp"
#include "nilspec/product.hpp"
#include "nilspec/twostep.hpp"

namespace nilspec {

using nlohmann::json;

// integers serialize as JSON numbers when they fit in 64 bits, otherwise as
// decimal strings; both forms parse back
json int_to_json(const Int& v);
Int int_from_json(const json& j);

json extnat_to_json(const ExtNat& v); // number or "inf"

// {"rows": [[1, 1], [0, 1]]}
IntMatrix matrix_from_json(const json& j);
json matrix_to_json(const IntMatrix& m);

// {"vertices": ["a", "b"], "edges": [["a", "b"]]}; labels are sorted so the
// generator order of the group is reproducible
Graph graph_from_json(const json& j);
json graph_to_json(const Graph& g);

// {"x": [...], "y": [...]}
GroupElement element_from_json(const json& j);
json element_to_json(const GroupElement& e);

// {"images": [element, ...]}
std::vector<GroupElement> images_from_json(const json& j);
json endo_to_json(const Endo& f);

json load_json_file(const std::filesystem::path& path);

// a group file is either a graph object or {"product": [ref, ...]} where each
// ref is a path relative to the referencing file
TwoStepGroup group_from_file(const std::filesystem::path& path);

// {"factors": [graphref, ...], "blocks": [[endoref | endo | "zero", ...], ...]}
BlockMap blockmap_from_file(const std::filesystem::path& path);

} // namespace nilspec
