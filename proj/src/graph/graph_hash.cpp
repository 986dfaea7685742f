#include "graph/graph_hash.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <unordered_set>

#include "common/error.hpp"
#include "common/hash.hpp"

namespace archbench {

namespace {

constexpr int kMaxNodes = 32;
constexpr int kInputLabel = -1;
constexpr int kOutputLabel = -2;
constexpr std::uint64_t kSeparator = 0x9e3779b97f4a7c15ULL;

using Masks = std::array<std::uint32_t, kMaxNodes>;

struct Dag {
  int n = 0;
  Masks out{};
  Masks in{};
};

std::uint64_t hash_words(const std::uint64_t *words, std::size_t count) {
  return hash_bytes(std::string_view(reinterpret_cast<const char *>(words), count * sizeof(std::uint64_t)));
}

// Nodes on some input-to-output path.
std::uint32_t on_path(const Dag &g) {
  std::uint32_t fwd = 1u, bwd = 1u << (g.n - 1);
  for (int v = 0; v < g.n; ++v)
    if (fwd >> v & 1u) fwd |= g.out[v];
  for (int v = g.n - 1; v >= 0; --v)
    if (bwd >> v & 1u) bwd |= g.in[v];
  return fwd & bwd;
}

// Edges are stored from < to, so node order is a topological order and
// the single forward/backward passes above are complete.
std::uint64_t wl_hash(const Dag &g, std::uint32_t kept, const int *labels) {
  std::array<std::uint64_t, kMaxNodes> h{}, next{};
  std::array<std::uint64_t, 2 * kMaxNodes + 3> buf{};
  for (int v = 0; v < g.n; ++v) {
    if (!(kept >> v & 1u)) continue;
    const std::uint64_t words[3] = {static_cast<std::uint64_t>(__builtin_popcount(g.out[v] & kept)),
                                    static_cast<std::uint64_t>(__builtin_popcount(g.in[v] & kept)),
                                    static_cast<std::uint64_t>(static_cast<std::int64_t>(labels[v]))};
    h[v] = hash_words(words, 3);
  }
  for (int round = 0; round < g.n; ++round) {
    for (int v = 0; v < g.n; ++v) {
      if (!(kept >> v & 1u)) continue;
      std::size_t k = 0;
      const std::size_t in_begin = k;
      for (int w = 0; w < g.n; ++w)
        if ((g.in[v] & kept) >> w & 1u) buf[k++] = h[w];
      std::sort(buf.begin() + in_begin, buf.begin() + k);
      buf[k++] = kSeparator;
      const std::size_t out_begin = k;
      for (int w = 0; w < g.n; ++w)
        if ((g.out[v] & kept) >> w & 1u) buf[k++] = h[w];
      std::sort(buf.begin() + out_begin, buf.begin() + k);
      buf[k++] = kSeparator;
      buf[k++] = h[v];
      next[v] = hash_words(buf.data(), k);
    }
    h = next;
  }
  std::size_t k = 0;
  for (int v = 0; v < g.n; ++v)
    if (kept >> v & 1u) buf[k++] = h[v];
  std::sort(buf.begin(), buf.begin() + k);
  return hash_words(buf.data(), k);
}

void require_node_ops(const SearchSpaceDef &space) {
  if (space.label_mode != LabelMode::node_ops) {
    throw Error(ErrorCode::unsupported_reduction, "graph hashing needs a node-ops space");
  }
  if (space.num_nodes > kMaxNodes) {
    throw Error(ErrorCode::unsupported_reduction, "graph hashing supports at most 32 nodes");
  }
}

}  // namespace

std::uint64_t graph_hash(const CellGraph &cell, const SearchSpaceDef &space) {
  require_node_ops(space);
  validate_cell(cell, space);
  Dag g;
  g.n = space.num_nodes;
  for (std::size_t e = 0; e < space.edges.size(); ++e) {
    if (space.variable_topology && !cell.active[e]) continue;
    const auto [u, v] = space.edges[e];
    g.out[u] |= 1u << v;
    g.in[v] |= 1u << u;
  }
  const std::uint32_t kept = on_path(g);
  if (!(kept >> (g.n - 1) & 1u)) {
    throw Error(ErrorCode::invalid_architecture, "cell has no input-to-output path");
  }
  std::array<int, kMaxNodes> labels{};
  labels[0] = kInputLabel;
  labels[g.n - 1] = kOutputLabel;
  for (int v = 1; v + 1 < g.n; ++v) labels[v] = cell.ops[static_cast<std::size_t>(v - 1)];
  return wl_hash(g, kept, labels.data());
}

std::size_t count_unique_graphs(const SearchSpaceDef &space) {
  require_node_ops(space);
  if (!space.variable_topology) throw Error(ErrorCode::parameter, "space has a fixed topology");
  if (space.edges.size() > 64) throw Error(ErrorCode::parameter, "too many candidate edges to enumerate");
  const int n = space.num_nodes;
  const int max_edges = space.topology.max_edges.value_or(static_cast<int>(space.edges.size()));
  const int n_ops = static_cast<int>(space.op_vocab.size());

  std::unordered_set<std::uint64_t> pruned_seen;
  std::unordered_set<std::uint64_t> hashes;
  std::array<int, kMaxNodes> labels{};
  labels[0] = kInputLabel;
  labels[n - 1] = kOutputLabel;

  auto visit = [&](const Dag &g) {
    const std::uint32_t kept = on_path(g);
    if (!(kept >> (n - 1) & 1u)) return;
    // Different raw edge sets that prune to the same graph hash alike.
    std::uint64_t key = 0;
    Dag pruned;
    pruned.n = n;
    for (std::size_t e = 0; e < space.edges.size(); ++e) {
      const auto [u, v] = space.edges[e];
      if ((g.out[u] >> v & 1u) && (kept >> u & 1u) && (kept >> v & 1u)) {
        key |= std::uint64_t{1} << e;
        pruned.out[u] |= 1u << v;
        pruned.in[v] |= 1u << u;
      }
    }
    if (!pruned_seen.insert(key).second) return;
    std::vector<int> interior;
    for (int v = 1; v + 1 < n; ++v)
      if (kept >> v & 1u) interior.push_back(v);
    for (int v : interior) labels[v] = 0;
    while (true) {
      hashes.insert(wl_hash(pruned, kept, labels.data()));
      std::size_t i = 0;
      while (i < interior.size() && ++labels[interior[i]] == n_ops) labels[interior[i++]] = 0;
      if (i == interior.size()) break;
    }
  };

  Dag g;
  g.n = n;
  auto recurse = [&](auto &&self, std::size_t e, int used) -> void {
    if (e == space.edges.size()) {
      visit(g);
      return;
    }
    self(self, e + 1, used);
    if (used == max_edges) return;
    const auto [u, v] = space.edges[e];
    g.out[u] |= 1u << v;
    g.in[v] |= 1u << u;
    self(self, e + 1, used + 1);
    g.out[u] &= ~(1u << v);
    g.in[v] &= ~(1u << u);
  };
  recurse(recurse, 0, 0);
  return hashes.size();
}

}  // namespace archbench
