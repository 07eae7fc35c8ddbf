#include "nilspec/graph.hpp"

#include <algorithm>
#include <set>

namespace nilspec {

Graph::Graph(std::vector<std::string> vertices,
             std::vector<std::pair<std::size_t, std::size_t>> edges)
    : vertices_(std::move(vertices)) {
    const std::size_t n = vertices_.size();
    {
        std::set<std::string> seen(vertices_.begin(), vertices_.end());
        if (seen.size() != n) throw FormatError("graph: duplicate vertex label");
    }
    adj_.assign(n, std::vector<bool>(n, false));
    for (std::size_t k = 0; k < edges.size(); ++k) {
        auto [i, j] = edges[k];
        if (i >= n || j >= n)
            throw FormatError("graph: edge " + std::to_string(k) +
                              " references an unknown vertex");
        if (i == j)
            throw FormatError("graph: edge " + std::to_string(k) + " is a loop at '" +
                              vertices_[i] + "'");
        if (adj_[i][j])
            throw FormatError("graph: duplicate edge at position " + std::to_string(k));
        adj_[i][j] = adj_[j][i] = true;
    }
}

bool Graph::has_edge(std::size_t i, std::size_t j) const { return adj_[i][j]; }

std::vector<std::pair<std::size_t, std::size_t>> Graph::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (adj_[i][j]) out.emplace_back(i, j);
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::non_edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (!adj_[i][j]) out.emplace_back(i, j);
    return out;
}

std::size_t Graph::edge_count() const { return edges().size(); }

Graph Graph::complement() const {
    return Graph(vertices_, non_edges());
}

std::vector<std::vector<std::size_t>> Graph::connected_components() const {
    const std::size_t n = size();
    std::vector<std::vector<std::size_t>> components;
    std::vector<bool> seen(n, false);
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<std::size_t> component, stack{start};
        seen[start] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            component.push_back(v);
            for (std::size_t w = 0; w < n; ++w)
                if (adj_[v][w] && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
    }
    return components;
}

Graph Graph::induced(const std::vector<std::size_t>& subset) const {
    std::vector<std::string> vs;
    vs.reserve(subset.size());
    for (std::size_t v : subset) vs.push_back(vertices_[v]);
    std::vector<std::pair<std::size_t, std::size_t>> es;
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            if (adj_[subset[a]][subset[b]]) es.emplace_back(a, b);
    return Graph(std::move(vs), std::move(es));
}

bool Graph::operator==(const Graph& o) const {
    return vertices_ == o.vertices_ && adj_ == o.adj_;
}

std::optional<JoinSplit> split_join(const Graph& g) {
    if (g.size() == 0) throw DomainError("split_join: graph must be non-empty");
    auto parts = g.complement().connected_components();
    if (parts.size() < 2) return std::nullopt;
    // stable presentation order: smaller parts first, then by smallest label
    std::sort(parts.begin(), parts.end(),
              [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
                  if (a.size() != b.size()) return a.size() < b.size();
                  return g.vertices()[a[0]] < g.vertices()[b[0]];
              });
    return JoinSplit{std::move(parts)};
}

bool is_rationally_indecomposable(const Graph& g) {
    return !split_join(g).has_value();
}

} // namespace nilspec
