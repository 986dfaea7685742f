#pragma once

#include <string>

#include "graph/search_space.hpp"

namespace archbench {

/// How cells of an edge-ops space are grouped into equivalence classes.
///
/// `expression`: each node's value is the sorted `+`-join of its incoming
/// terms. A term is `#` (zero) when the edge is the zero op or its source
/// value is exactly `#`; the identity op forwards the source value; any
/// other op yields `(<source>)@<op>`. Two cells are equivalent when their
/// output-node values match. On the 6-edge x 5-op space this gives 6,466
/// classes.
///
/// `structural`: zero-op edges are deleted, interior nodes lacking an
/// incoming or outgoing edge are deleted repeatedly, and the remaining
/// labeled graph (fixed node order) is the key. Cells without an
/// input-to-output path share the single key "disconnected". 9,445 classes
/// on the same space.
enum class ReductionRule { expression, structural };

/// Class key of a cell. Throws Error(unsupported_reduction) unless the
/// space is edge-ops, fixed-topology, and has a zero ("none") operation.
std::string equivalence_key(const CellGraph &cell, const SearchSpaceDef &space,
                            ReductionRule rule = ReductionRule::expression);

/// Reduced class representative.
///
/// Structural: the input cell with every pruned edge set to the zero op.
/// Expression: the member of the class with the lexicographically smallest
/// op-index vector (found by enumerating the space once per space and
/// caching the index). Both are idempotent.
CellGraph prune_equivalent(const CellGraph &cell, const SearchSpaceDef &space,
                           ReductionRule rule = ReductionRule::expression);

/// True when no input-to-output path survives after deleting zero-op edges.
bool is_disconnected(const CellGraph &cell, const SearchSpaceDef &space);

/// Number of distinct classes over the whole (enumerable) space.
std::size_t count_equivalence_classes(
    const SearchSpaceDef &space, ReductionRule rule = ReductionRule::expression);

}  // namespace archbench
