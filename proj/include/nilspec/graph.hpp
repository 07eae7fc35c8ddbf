#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nilspec/errors.hpp"

namespace nilspec {

// Finite simple graph. The vertex order is the canonical generator order of
// the associated 2-step group, so construction never reorders; the JSON
// parser sorts labels before construction to make group builds reproducible.
class Graph {
public:
    Graph(std::vector<std::string> vertices,
          std::vector<std::pair<std::size_t, std::size_t>> edges);

    std::size_t size() const { return vertices_.size(); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    bool has_edge(std::size_t i, std::size_t j) const;

    // pairs (i, j) with i < j, lexicographic
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    std::vector<std::pair<std::size_t, std::size_t>> non_edges() const;
    std::size_t edge_count() const;

    Graph complement() const;
    std::vector<std::vector<std::size_t>> connected_components() const;
    Graph induced(const std::vector<std::size_t>& subset) const;

    bool operator==(const Graph& o) const;

private:
    std::vector<std::string> vertices_;
    std::vector<std::vector<bool>> adj_;
};

// Decomposition of the vertex set witnessing a simplicial join: every
// cross-part pair is an edge and each part is itself join-indecomposable.
struct JoinSplit {
    std::vector<std::vector<std::size_t>> parts;
};

// Parts are the connected components of the complement graph; a connected
// complement means the graph is not a join. This criterion is validated
// exhaustively against the definitional bipartition search in the tests.
// Empty graphs are rejected.
std::optional<JoinSplit> split_join(const Graph& g);

// The 2-step group of a graph is rationally indecomposable exactly when the
// graph does not split as a simplicial join.
bool is_rationally_indecomposable(const Graph& g);

} // namespace nilspec
