#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "common/rng.hpp"
#include "graph/search_space.hpp"

namespace archbench {

/// Every valid cell reachable by one change: a labeled slot set to another
/// op, an aux bit flipped, a macro slot changed, or (variable topology) one
/// adjacency bit toggled such that the result stays valid. Order is
/// deterministic: labeled slots, adjacency toggles, aux bits, macro slots.
std::vector<CellGraph> neighbors(const CellGraph &cell,
                                 const SearchSpaceDef &space);

/// Uniform draw from neighbors(cell). Throws Error(no_neighbor) when the
/// neighbor set is empty.
CellGraph mutate(const CellGraph &cell, const SearchSpaceDef &space, Rng &rng);

/// Independent uniform draw per slot. Variable-topology spaces use rejection
/// sampling over (edge subset, node ops) so the result is uniform over
/// valid cells.
CellGraph sample_uniform(const SearchSpaceDef &space, Rng &rng);

/// Visits every valid cell in lexicographic slot order (labeled slots first,
/// then adjacency bits, aux bits, macro slots). Returning false from the
/// visitor stops the enumeration.
void for_each_cell(const SearchSpaceDef &space,
                   const std::function<bool(const CellGraph &)> &visit);

/// Number of valid topologies (1 for fixed-topology spaces). nullopt when
/// the adjacency set is too large to enumerate (more than 24 edges).
std::optional<std::uint64_t> count_valid_topologies(const SearchSpaceDef &space);

/// Adjacency one-hot encoding: one block per labeled slot, one per macro
/// slot, one bit per aux edge and, for variable topologies, one bit per edge.
std::vector<double> encode_onehot(const CellGraph &cell,
                                  const SearchSpaceDef &space);

std::size_t onehot_width(const SearchSpaceDef &space);

}  // namespace archbench
