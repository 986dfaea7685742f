#include "graph/equivalence.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "common/error.hpp"
#include "graph/arch_id.hpp"
#include "graph/neighborhood.hpp"

namespace archbench {

namespace {

int require_reducible(const SearchSpaceDef &space) {
  if (space.label_mode != LabelMode::edge_ops || space.variable_topology) {
    throw Error(ErrorCode::unsupported_reduction,
                "equivalence reduction needs a fixed-topology edge-ops space");
  }
  auto zero = space.zero_op();
  if (!zero) {
    throw Error(ErrorCode::unsupported_reduction,
                "space '" + space.space_id + "' has no \"none\" operation");
  }
  return *zero;
}

const std::string kZero = "#";

std::string expression_key(const CellGraph &cell, const SearchSpaceDef &space,
                           int zero) {
  const auto identity = space.identity_op();
  std::vector<std::string> value(static_cast<std::size_t>(space.num_nodes));
  value[0] = "0";
  std::vector<std::vector<std::string>> terms(value.size());
  // Edges are sorted by source, so every source value is final before it
  // is read; targets are joined once all smaller sources are visited.
  std::vector<std::size_t> order(space.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return space.edges[a].to < space.edges[b].to;
  });
  int current = 1;
  auto finish_until = [&](int node) {
    for (; current < node; ++current) {
      auto &t = terms[static_cast<std::size_t>(current)];
      std::sort(t.begin(), t.end());
      std::string joined;
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) joined.push_back('+');
        joined += t[k];
      }
      value[static_cast<std::size_t>(current)] = t.empty() ? kZero : joined;
    }
  };
  for (std::size_t slot : order) {
    const auto &e = space.edges[slot];
    finish_until(e.to);
    const auto &src = value[static_cast<std::size_t>(e.from)];
    const int op = cell.ops[slot];
    std::string term;
    if (op == zero || src == kZero) {
      term = kZero;
    } else if (identity && op == *identity) {
      term = src;
    } else {
      term = "(" + src + ")@" + space.op_vocab[static_cast<std::size_t>(op)];
    }
    terms[static_cast<std::size_t>(e.to)].push_back(std::move(term));
  }
  finish_until(space.num_nodes);
  return value.back();
}

// Surviving edge mask after the structural pruning steps.
std::vector<std::uint8_t> structural_survivors(const CellGraph &cell,
                                               const SearchSpaceDef &space,
                                               int zero) {
  const std::size_t n_edges = space.edges.size();
  std::vector<std::uint8_t> alive(n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) alive[i] = cell.ops[i] != zero;
  std::vector<char> node_alive(static_cast<std::size_t>(space.num_nodes), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int node = 1; node + 1 < space.num_nodes; ++node) {
      if (!node_alive[static_cast<std::size_t>(node)]) continue;
      bool in = false, out = false;
      for (std::size_t i = 0; i < n_edges; ++i) {
        if (!alive[i]) continue;
        if (space.edges[i].to == node) in = true;
        if (space.edges[i].from == node) out = true;
      }
      if (in && out) continue;
      node_alive[static_cast<std::size_t>(node)] = 0;
      for (std::size_t i = 0; i < n_edges; ++i) {
        if (space.edges[i].to == node || space.edges[i].from == node) alive[i] = 0;
      }
      changed = true;
    }
  }
  return alive;
}

std::string structural_key(const CellGraph &cell, const SearchSpaceDef &space,
                           int zero) {
  const auto alive = structural_survivors(cell, space, zero);
  if (!has_input_output_path(space, alive)) return "disconnected";
  std::string key;
  for (std::size_t i = 0; i < alive.size(); ++i) {
    if (!alive[i]) continue;
    const auto &e = space.edges[i];
    key += std::to_string(e.from) + ">" + std::to_string(e.to) + ":" +
           space.op_vocab[static_cast<std::size_t>(cell.ops[i])] + ";";
  }
  return key;
}

using ClassIndex = std::unordered_map<std::string, CellGraph>;

// Key -> smallest member, built once per distinct space definition.
std::shared_ptr<const ClassIndex> expression_index(const SearchSpaceDef &space) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const ClassIndex>> cache;
  const std::string cache_key = nlohmann::json(space).dump();
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(cache_key); it != cache.end()) return it->second;
  }
  const int zero = require_reducible(space);
  auto index = std::make_shared<ClassIndex>();
  // Enumeration order is lexicographic in the op vector, so the first
  // member seen for a key is the smallest.
  for_each_cell(space, [&](const CellGraph &c) {
    index->try_emplace(expression_key(c, space, zero), c);
    return true;
  });
  std::lock_guard<std::mutex> lock(mutex);
  return cache.try_emplace(cache_key, std::move(index)).first->second;
}

}  // namespace

std::string equivalence_key(const CellGraph &cell, const SearchSpaceDef &space,
                            ReductionRule rule) {
  const int zero = require_reducible(space);
  validate_cell(cell, space);
  return rule == ReductionRule::expression ? expression_key(cell, space, zero)
                                           : structural_key(cell, space, zero);
}

CellGraph prune_equivalent(const CellGraph &cell, const SearchSpaceDef &space,
                           ReductionRule rule) {
  const int zero = require_reducible(space);
  validate_cell(cell, space);
  if (rule == ReductionRule::structural) {
    const auto alive = structural_survivors(cell, space, zero);
    CellGraph reduced = cell;
    const bool connected = has_input_output_path(space, alive);
    for (std::size_t i = 0; i < alive.size(); ++i) {
      if (!alive[i] || !connected) reduced.ops[i] = zero;
    }
    return reduced;
  }
  const auto index = expression_index(space);
  return index->at(expression_key(cell, space, zero));
}

bool is_disconnected(const CellGraph &cell, const SearchSpaceDef &space) {
  const int zero = require_reducible(space);
  validate_cell(cell, space);
  std::vector<std::uint8_t> alive(space.edges.size());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = cell.ops[i] != zero;
  return !has_input_output_path(space, alive);
}

std::size_t count_equivalence_classes(const SearchSpaceDef &space,
                                      ReductionRule rule) {
  if (rule == ReductionRule::expression) return expression_index(space)->size();
  const int zero = require_reducible(space);
  std::unordered_set<std::string> keys;
  for_each_cell(space, [&](const CellGraph &c) {
    keys.insert(structural_key(c, space, zero));
    return true;
  });
  return keys.size();
}

}  // namespace archbench
