#include "graph/neighborhood.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace archbench {

std::vector<CellGraph> neighbors(const CellGraph &cell,
                                 const SearchSpaceDef &space) {
  validate_cell(cell, space);
  std::vector<CellGraph> out;
  const int vocab = static_cast<int>(space.op_vocab.size());
  for (std::size_t i = 0; i < cell.ops.size(); ++i) {
    for (int op = 0; op < vocab; ++op) {
      if (op == cell.ops[i]) continue;
      CellGraph next = cell;
      next.ops[i] = op;
      out.push_back(std::move(next));
    }
  }
  for (std::size_t i = 0; i < cell.active.size(); ++i) {
    CellGraph next = cell;
    next.active[i] ^= 1;
    if (is_valid_cell(next, space)) out.push_back(std::move(next));
  }
  for (std::size_t i = 0; i < cell.aux.size(); ++i) {
    CellGraph next = cell;
    next.aux[i] ^= 1;
    out.push_back(std::move(next));
  }
  for (std::size_t i = 0; i < cell.macro.size(); ++i) {
    for (int c = 0; c < space.macro_slots[i].cardinality; ++c) {
      if (c == cell.macro[i]) continue;
      CellGraph next = cell;
      next.macro[i] = c;
      out.push_back(std::move(next));
    }
  }
  return out;
}

CellGraph mutate(const CellGraph &cell, const SearchSpaceDef &space, Rng &rng) {
  auto options = neighbors(cell, space);
  if (options.empty()) {
    throw Error(ErrorCode::no_neighbor,
                "architecture has no neighbors in space '" + space.space_id + "'");
  }
  return std::move(options[rng.uniform_index(options.size())]);
}

namespace {

CellGraph draw_slots(const SearchSpaceDef &space, Rng &rng) {
  CellGraph cell;
  cell.ops.resize(space.labeled_slot_count());
  for (auto &op : cell.ops) op = static_cast<int>(rng.uniform_index(space.op_vocab.size()));
  if (space.variable_topology) {
    cell.active.resize(space.edges.size());
    for (auto &b : cell.active) b = rng.coin() ? 1 : 0;
  }
  cell.aux.resize(space.aux_edges.size());
  for (auto &b : cell.aux) b = rng.coin() ? 1 : 0;
  cell.macro.resize(space.macro_slots.size());
  for (std::size_t i = 0; i < cell.macro.size(); ++i) {
    cell.macro[i] = static_cast<int>(
        rng.uniform_index(static_cast<std::uint64_t>(space.macro_slots[i].cardinality)));
  }
  return cell;
}

}  // namespace

CellGraph sample_uniform(const SearchSpaceDef &space, Rng &rng) {
  constexpr int kMaxRejections = 1'000'000;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    CellGraph cell = draw_slots(space, rng);
    if (!space.variable_topology || is_valid_cell(cell, space)) return cell;
  }
  throw Error(ErrorCode::exhausted,
              "rejection sampling found no valid topology in space '" +
                  space.space_id + "'");
}

void for_each_cell(const SearchSpaceDef &space,
                   const std::function<bool(const CellGraph &)> &visit) {
  // Mixed-radix counter over all slots; the last slot varies fastest.
  std::vector<int> radix;
  for (std::size_t i = 0; i < space.labeled_slot_count(); ++i) {
    radix.push_back(static_cast<int>(space.op_vocab.size()));
  }
  const std::size_t n_ops = radix.size();
  const std::size_t n_active = space.variable_topology ? space.edges.size() : 0;
  radix.insert(radix.end(), n_active, 2);
  radix.insert(radix.end(), space.aux_edges.size(), 2);
  for (const auto &slot : space.macro_slots) radix.push_back(slot.cardinality);

  std::vector<int> digits(radix.size(), 0);
  CellGraph cell;
  cell.ops.resize(n_ops);
  cell.active.resize(n_active);
  cell.aux.resize(space.aux_edges.size());
  cell.macro.resize(space.macro_slots.size());
  while (true) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < n_ops; ++i) cell.ops[i] = digits[d++];
    for (std::size_t i = 0; i < n_active; ++i) cell.active[i] = static_cast<std::uint8_t>(digits[d++]);
    for (auto &b : cell.aux) b = static_cast<std::uint8_t>(digits[d++]);
    for (auto &m : cell.macro) m = digits[d++];
    if (!space.variable_topology || is_valid_cell(cell, space)) {
      if (!visit(cell)) return;
    }
    std::size_t pos = digits.size();
    while (pos > 0) {
      --pos;
      if (++digits[pos] < radix[pos]) break;
      digits[pos] = 0;
      if (pos == 0) return;
    }
    if (digits.empty()) return;
  }
}

std::optional<std::uint64_t> count_valid_topologies(const SearchSpaceDef &space) {
  if (!space.variable_topology) return 1;
  const std::size_t n = space.edges.size();
  if (n > 24) return std::nullopt;
  std::uint64_t count = 0;
  std::vector<std::uint8_t> active(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    int edges = 0;
    for (std::size_t i = 0; i < n; ++i) {
      active[i] = static_cast<std::uint8_t>((mask >> i) & 1);
      edges += active[i];
    }
    if (space.topology.max_edges && edges > *space.topology.max_edges) continue;
    if (space.topology.require_connectivity && !has_input_output_path(space, active)) continue;
    ++count;
  }
  return count;
}

std::size_t onehot_width(const SearchSpaceDef &space) {
  std::size_t width = space.labeled_slot_count() * space.op_vocab.size();
  for (const auto &slot : space.macro_slots) width += static_cast<std::size_t>(slot.cardinality);
  width += space.aux_edges.size();
  if (space.variable_topology) width += space.edges.size();
  return width;
}

std::vector<double> encode_onehot(const CellGraph &cell,
                                  const SearchSpaceDef &space) {
  validate_cell(cell, space);
  std::vector<double> out(onehot_width(space), 0.0);
  std::size_t base = 0;
  const std::size_t vocab = space.op_vocab.size();
  for (int op : cell.ops) {
    out[base + static_cast<std::size_t>(op)] = 1.0;
    base += vocab;
  }
  for (std::size_t i = 0; i < cell.macro.size(); ++i) {
    out[base + static_cast<std::size_t>(cell.macro[i])] = 1.0;
    base += static_cast<std::size_t>(space.macro_slots[i].cardinality);
  }
  for (auto b : cell.aux) out[base++] = b;
  for (auto b : cell.active) out[base++] = b;
  return out;
}

}  // namespace archbench
