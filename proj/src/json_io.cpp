#include "nilspec/json_io.hpp"

#include <algorithm>
#include <fstream>

namespace nilspec {

json int_to_json(const Int& v) {
    static const Int lo = std::numeric_limits<std::int64_t>::min();
    static const Int hi = std::numeric_limits<std::int64_t>::max();
    if (v >= lo && v <= hi) return v.convert_to<std::int64_t>();
    return v.str();
}

Int int_from_json(const json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Int(j.get<std::uint64_t>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::exception&) {
            throw FormatError("expected a decimal integer string, got \"" +
                              j.get<std::string>() + "\"");
        }
    }
    throw FormatError("expected an integer (number or decimal string)");
}

json extnat_to_json(const ExtNat& v) {
    if (v.is_infinite()) return "inf";
    return int_to_json(v.value());
}

IntMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        throw FormatError("matrix: expected {\"rows\": [[...], ...]}");
    std::vector<IntVec> rows;
    for (const json& r : j["rows"]) {
        if (!r.is_array()) throw FormatError("matrix: each row must be an array");
        IntVec row;
        for (const json& e : r) row.push_back(int_from_json(e));
        rows.push_back(std::move(row));
    }
    for (const IntVec& r : rows)
        if (r.size() != rows[0].size())
            throw FormatError("matrix: rows have unequal lengths");
    if (rows.empty()) return IntMatrix();
    return IntMatrix::from_rows(rows);
}

json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"rows", std::move(rows)}};
}

Graph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw FormatError("graph: expected {\"vertices\": [...], \"edges\": [...]}");
    std::vector<std::string> labels;
    for (const json& v : j["vertices"]) {
        if (!v.is_string()) throw FormatError("graph: vertex labels must be strings");
        labels.push_back(v.get<std::string>());
    }
    std::sort(labels.begin(), labels.end());
    auto index_of = [&](const std::string& s, std::size_t at) {
        auto it = std::lower_bound(labels.begin(), labels.end(), s);
        if (it == labels.end() || *it != s)
            throw FormatError("graph: edge " + std::to_string(at) +
                              " references unknown vertex '" + s + "'");
        return std::size_t(it - labels.begin());
    };
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw FormatError("graph: edges must be an array");
        std::size_t at = 0;
        for (const json& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
                throw FormatError("graph: edge " + std::to_string(at) +
                                  " must be a pair of vertex labels");
            edges.emplace_back(index_of(e[0].get<std::string>(), at),
                               index_of(e[1].get<std::string>(), at));
            ++at;
        }
    }
    return Graph(std::move(labels), std::move(edges));
}

json graph_to_json(const Graph& g) {
    json vs = json::array();
    for (const std::string& v : g.vertices()) vs.push_back(v);
    json es = json::array();
    for (auto [i, j] : g.edges())
        es.push_back(json::array({g.vertices()[i], g.vertices()[j]}));
    return json{{"vertices", std::move(vs)}, {"edges", std::move(es)}};
}

GroupElement element_from_json(const json& j) {
    if (!j.is_object() || !j.contains("x") || !j.contains("y"))
        throw FormatError("element: expected {\"x\": [...], \"y\": [...]}");
    GroupElement e;
    for (const json& v : j["x"]) e.x.push_back(int_from_json(v));
    for (const json& v : j["y"]) e.y.push_back(int_from_json(v));
    return e;
}

json element_to_json(const GroupElement& e) {
    json x = json::array(), y = json::array();
    for (const Int& v : e.x) x.push_back(int_to_json(v));
    for (const Int& v : e.y) y.push_back(int_to_json(v));
    return json{{"x", std::move(x)}, {"y", std::move(y)}};
}

std::vector<GroupElement> images_from_json(const json& j) {
    if (!j.is_object() || !j.contains("images") || !j["images"].is_array())
        throw FormatError("endomorphism: expected {\"images\": [...]}");
    std::vector<GroupElement> images;
    for (const json& e : j["images"]) images.push_back(element_from_json(e));
    return images;
}

json endo_to_json(const Endo& f) {
    json images = json::array();
    for (const GroupElement& e : f.images) images.push_back(element_to_json(e));
    return json{{"images", std::move(images)}};
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw FormatError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

TwoStepGroup group_from_file(const std::filesystem::path& path) {
    json j = load_json_file(path);
    if (j.is_object() && j.contains("product")) {
        if (!j["product"].is_array() || j["product"].empty())
            throw FormatError("group: \"product\" must be a non-empty array of paths");
        std::vector<TwoStepGroup> factors;
        for (const json& ref : j["product"]) {
            if (!ref.is_string())
                throw FormatError("group: product entries must be file paths");
            factors.push_back(
                group_from_file(path.parent_path() / ref.get<std::string>()));
        }
        return direct_product_group(factors);
    }
    return build_graph_group(graph_from_json(j));
}

BlockMap blockmap_from_file(const std::filesystem::path& path) {
    json j = load_json_file(path);
    if (!j.is_object() || !j.contains("factors") || !j.contains("blocks"))
        throw FormatError("block map: expected {\"factors\": [...], \"blocks\": [...]}");
    BlockMap b;
    for (const json& ref : j["factors"]) {
        if (!ref.is_string()) throw FormatError("block map: factors must be file paths");
        b.factors.push_back(group_from_file(path.parent_path() / ref.get<std::string>()));
    }
    if (!j["blocks"].is_array() || j["blocks"].size() != b.factors.size())
        throw FormatError("block map: blocks must be a k x k array");
    for (const json& row : j["blocks"]) {
        if (!row.is_array() || row.size() != b.factors.size())
            throw FormatError("block map: blocks must be a k x k array");
        std::vector<BlockEntry> entries;
        for (const json& cell : row) {
            BlockEntry e;
            if (cell.is_string() && cell.get<std::string>() == "zero") {
                e.zero = true;
            } else if (cell.is_string()) {
                e.zero = false;
                e.images = images_from_json(
                    load_json_file(path.parent_path() / cell.get<std::string>()));
            } else {
                e.zero = false;
                e.images = images_from_json(cell);
            }
            entries.push_back(std::move(e));
        }
        b.blocks.push_back(std::move(entries));
    }
    return b;
}

} // namespace nilspec
