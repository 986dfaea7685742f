#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "catalog/catalog.hpp"
#include "common/error.hpp"
#include "graph/arch_id.hpp"
#include "graph/equivalence.hpp"
#include "graph/graph_hash.hpp"
#include "graph/neighborhood.hpp"

using namespace archbench;

namespace {

std::vector<CellGraph> all_cells(const SearchSpaceDef &space) {
  std::vector<CellGraph> out;
  for_each_cell(space, [&](const CellGraph &c) {
    out.push_back(c);
    return true;
  });
  return out;
}

// Number of differing slots, counting every vector position.
int slot_distance(const CellGraph &a, const CellGraph &b) {
  int d = 0;
  for (std::size_t i = 0; i < a.ops.size(); ++i) d += a.ops[i] != b.ops[i];
  for (std::size_t i = 0; i < a.active.size(); ++i) d += a.active[i] != b.active[i];
  for (std::size_t i = 0; i < a.aux.size(); ++i) d += a.aux[i] != b.aux[i];
  for (std::size_t i = 0; i < a.macro.size(); ++i) d += a.macro[i] != b.macro[i];
  return d;
}

// Brute-force neighbor oracle: scan the whole space for distance-1 cells.
std::set<CellGraph> brute_neighbors(const CellGraph &cell,
                                    const std::vector<CellGraph> &space_cells) {
  std::set<CellGraph> out;
  for (const auto &c : space_cells) {
    if (slot_distance(cell, c) == 1) out.insert(c);
  }
  return out;
}

}  // namespace

TEST(ArchId, AllNoneCellUsesPipeFormat) {
  const auto space = make_nb201_like();
  CellGraph cell;
  cell.ops.assign(6, 0);
  EXPECT_EQ(canonical_encode(cell, space).str(),
            "|none~0|+|none~0|none~1|+|none~0|none~1|none~2|");
  const auto back = decode("|none~0|+|none~0|none~1|+|none~0|none~1|none~2|", space);
  EXPECT_EQ(back.ops, std::vector<int>(6, 0));
}

TEST(ArchId, RoundTripRandomCellsAcrossSpaces) {
  Rng rng(7);
  for (const auto &space : {make_nb201_like(), make_asr_like(), make_nb101_like(7, 9, 3),
                            make_macro_string({4, 4, 3}), make_synthetic(5, 3)}) {
    for (int i = 0; i < 1000; ++i) {
      const auto cell = sample_uniform(space, rng);
      const auto id = canonical_encode(cell, space);
      EXPECT_EQ(decode(id.str(), space), cell) << id.str();
      EXPECT_EQ(canonical_encode(decode(id.str(), space), space), id);
    }
  }
}

TEST(ArchId, SingleEdgeChangeGivesDistinctIds) {
  const auto space = make_nb201_like();
  CellGraph a;
  a.ops = {1, 2, 3, 4, 0, 1};
  CellGraph b = a;
  b.ops[3] = 2;
  EXPECT_NE(canonical_encode(a, space), canonical_encode(b, space));
}

TEST(ArchId, ExhaustiveToySpaceRoundTrip) {
  const auto space = make_synthetic(3, 2);
  const auto cells = all_cells(space);
  ASSERT_EQ(cells.size(), 8u);
  std::set<std::string> ids;
  for (const auto &c : cells) {
    const auto id = canonical_encode(c, space);
    ids.insert(id.str());
    EXPECT_EQ(decode(id.str(), space), c);
  }
  EXPECT_EQ(ids.size(), 8u);
}

TEST(ArchId, UnknownOpIsParseErrorWithPosition) {
  const auto space = make_nb201_like();
  try {
    decode("|none~0|+|conv9~0|none~1|+|none~0|none~1|none~2|", space);
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.position(), 10u);
  }
  EXPECT_THROW(decode("|none~0|+|none~0|none~1|", space), ParseError);
  EXPECT_THROW(decode("garbage", space), ParseError);
  EXPECT_THROW(decode("e0-1=op0;e1-2=op1;e2-3=op0;x", make_synthetic(3, 2)), ParseError);
}

TEST(ArchId, OpIndexOutOfRangeIsInvalidArchitecture) {
  const auto space = make_nb201_like();
  CellGraph cell;
  cell.ops = {0, 0, 0, 0, 0, 5};
  try {
    canonical_encode(cell, space);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_architecture);
  }
}

TEST(Neighbors, Nb201HasTwentyFourMatchingBruteForce) {
  const auto space = make_nb201_like();
  const auto cells = all_cells(space);
  Rng rng(3);
  for (int i = 0; i < 25; ++i) {
    const auto cell = cells[rng.uniform_index(cells.size())];
    const auto nb = neighbors(cell, space);
    EXPECT_EQ(nb.size(), 24u);
    EXPECT_EQ(std::set<CellGraph>(nb.begin(), nb.end()), brute_neighbors(cell, cells));
  }
}

TEST(Neighbors, TinySpaceHasOneNeighbor) {
  const auto space = make_synthetic(1, 2);
  CellGraph cell;
  cell.ops = {0};
  const auto nb = neighbors(cell, space);
  ASSERT_EQ(nb.size(), 1u);
  EXPECT_EQ(nb[0].ops[0], 1);
}

TEST(Neighbors, AsrLikeHasTwentyOneMatchingBruteForce) {
  const auto space = make_asr_like();
  const auto cells = all_cells(space);
  ASSERT_EQ(cells.size(), 13824u);
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto cell = cells[rng.uniform_index(cells.size())];
    const auto nb = neighbors(cell, space);
    EXPECT_EQ(nb.size(), 21u);
    EXPECT_EQ(std::set<CellGraph>(nb.begin(), nb.end()), brute_neighbors(cell, cells));
  }
}

TEST(Neighbors, FixedTopologySymmetryAndCountFormula) {
  for (const auto &space : {make_synthetic(3, 3), make_macro_string({4, 4, 3}), make_tnb_micro_like()}) {
    const auto cells = all_cells(space);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < space.labeled_slot_count(); ++i) expected += space.op_vocab.size() - 1;
    for (const auto &s : space.macro_slots) expected += static_cast<std::size_t>(s.cardinality - 1);
    expected += space.aux_edges.size();
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
      const auto a = cells[rng.uniform_index(cells.size())];
      const auto nb = neighbors(a, space);
      EXPECT_EQ(nb.size(), expected);
      EXPECT_EQ(std::set<CellGraph>(nb.begin(), nb.end()).size(), nb.size());
      for (const auto &b : nb) {
        EXPECT_NE(b, a);
        const auto back = neighbors(b, space);
        EXPECT_NE(std::find(back.begin(), back.end(), a), back.end());
      }
    }
  }
}

TEST(Neighbors, VariableTopologyExcludesInvalid) {
  const auto space = make_nb101_like(5, 4, 2);
  Rng rng(2);
  std::set<std::size_t> sizes;
  for (int i = 0; i < 200; ++i) {
    const auto cell = sample_uniform(space, rng);
    const auto nb = neighbors(cell, space);
    sizes.insert(nb.size());
    for (const auto &n : nb) {
      EXPECT_TRUE(is_valid_cell(n, space));
      EXPECT_EQ(slot_distance(n, cell), 1);
    }
  }
  EXPECT_GT(sizes.size(), 1u);
}

TEST(Mutate, UniformOverNeighborsAndDeterministic) {
  const auto space = make_nb201_like();
  CellGraph cell;
  cell.ops = {1, 2, 3, 4, 0, 1};
  const auto nb = neighbors(cell, space);
  std::map<CellGraph, int> counts;
  Rng rng(99);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    auto m = mutate(cell, space, rng);
    ASSERT_NE(std::find(nb.begin(), nb.end(), m), nb.end());
    counts[m]++;
  }
  ASSERT_EQ(counts.size(), 24u);
  const double p = 1.0 / 24.0;
  const double mean = draws * p;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (const auto &[c, n] : counts) {
    EXPECT_LE(std::abs(n - mean), 3.0 * sigma);
  }
  Rng r1(5), r2(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(mutate(cell, space, r1), mutate(cell, space, r2));
}

TEST(Mutate, NoNeighborError) {
  const auto space = make_synthetic(1, 1);
  CellGraph cell;
  cell.ops = {0};
  Rng rng(1);
  try {
    mutate(cell, space, rng);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::no_neighbor);
  }
}

TEST(SampleUniform, SingleCellSpace) {
  const auto space = make_synthetic(1, 1);
  Rng rng(4);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_uniform(space, rng).ops, std::vector<int>{0});
}

TEST(SampleUniform, MarginalsUniformAndReproducible) {
  const auto space = make_nb201_like();
  Rng rng(12);
  const int draws = 10000;
  std::vector<std::vector<int>> counts(6, std::vector<int>(5, 0));
  for (int i = 0; i < draws; ++i) {
    const auto c = sample_uniform(space, rng);
    for (int s = 0; s < 6; ++s) counts[s][c.ops[s]]++;
  }
  const double sigma = std::sqrt(draws * 0.2 * 0.8);
  for (const auto &slot : counts) {
    double chi2 = 0;
    for (int n : slot) {
      EXPECT_LE(std::abs(n - draws * 0.2), 3.0 * sigma);
      chi2 += (n - draws * 0.2) * (n - draws * 0.2) / (draws * 0.2);
    }
    EXPECT_LT(chi2, 18.47);  // chi-square 4 dof, p = 0.001
  }
  Rng a(8), b(8);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_uniform(space, a), sample_uniform(space, b));
}

TEST(SampleUniform, VariableTopologyUniformOverValidCells) {
  // nodes=3, max_edges=3, ops=1: valid cells are the DAGs on {in, mid, out}
  // containing an in->out path. Oracle: enumerate the 8 edge subsets.
  const auto space = make_nb101_like(3, 3, 1);
  int valid = 0;
  for (int mask = 0; mask < 8; ++mask) {
    const bool e01 = mask & 1, e02 = mask & 2, e12 = mask & 4;
    if (e02 || (e01 && e12)) ++valid;
  }
  EXPECT_EQ(valid, 5);
  EXPECT_EQ(all_cells(space).size(), 5u);
  EXPECT_EQ(*space_size(space).exact, 5u);
  Rng rng(21);
  std::map<CellGraph, int> counts;
  for (int i = 0; i < 5000; ++i) counts[sample_uniform(space, rng)]++;
  ASSERT_EQ(counts.size(), 5u);
  for (const auto &[c, n] : counts) EXPECT_NEAR(n, 1000, 3.5 * std::sqrt(5000 * 0.2 * 0.8));
}

TEST(Equivalence, AllNoneIsDisconnected) {
  const auto space = make_nb201_like();
  CellGraph cell;
  cell.ops.assign(6, 0);
  EXPECT_EQ(equivalence_key(cell, space, ReductionRule::structural), "disconnected");
  EXPECT_TRUE(is_disconnected(cell, space));
  EXPECT_EQ(prune_equivalent(cell, space), cell);
}

TEST(Equivalence, DanglingNodeIsPruned) {
  // Edge order: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
  const auto space = make_nb201_like();
  const int conv3 = *space.op_index("nor_conv_3x3");
  CellGraph cell;
  cell.ops = {conv3, conv3, 1, 0, 0, 2};
  CellGraph expected = cell;
  expected.ops[0] = 0;
  for (auto rule : {ReductionRule::structural, ReductionRule::expression}) {
    EXPECT_EQ(prune_equivalent(cell, space, rule), expected);
    EXPECT_EQ(equivalence_key(cell, space, rule), equivalence_key(expected, space, rule));
  }
}

TEST(Equivalence, ClassCountsOnNb201) {
  const auto space = make_nb201_like();
  EXPECT_EQ(count_equivalence_classes(space, ReductionRule::expression), 6466u);
  EXPECT_EQ(count_equivalence_classes(space, ReductionRule::structural), 9445u);
}

TEST(Equivalence, IdempotentAndKeyPreserving) {
  const auto space = make_nb201_like();
  Rng rng(6);
  for (int i = 0; i < 300; ++i) {
    const auto cell = sample_uniform(space, rng);
    for (auto rule : {ReductionRule::structural, ReductionRule::expression}) {
      const auto r = prune_equivalent(cell, space, rule);
      EXPECT_EQ(prune_equivalent(r, space, rule), r);
      EXPECT_EQ(equivalence_key(r, space, rule), equivalence_key(cell, space, rule));
    }
  }
}

TEST(Equivalence, ExpressionClassesAreFunctionallySound) {
  // Independent oracle: evaluate each cell as a function with random
  // nonlinear ops without bias, so every op maps zero to zero (identity for
  // skip, zero for none). Cells sharing an
  // expression key must compute the same function.
  const auto space = make_nb201_like();
  Rng rng(31);
  constexpr int kDim = 4;
  std::vector<std::array<double, kDim * kDim>> params(5);
  for (auto &p : params) for (auto &x : p) x = rng.normal();
  std::array<double, kDim> input{};
  for (auto &x : input) x = rng.normal();
  auto evaluate = [&](const CellGraph &cell) {
    std::vector<std::array<double, kDim>> node(4);
    node[0] = input;
    for (int to = 1; to < 4; ++to) {
      std::array<double, kDim> sum{};
      for (int from = 0; from < to; ++from) {
        const int op = cell.ops[*space.edge_index({from, to})];
        if (op == 0) continue;
        for (int r = 0; r < kDim; ++r) {
          double v;
          if (op == 1) {
            v = node[from][r];
          } else {
            v = 0.0;
            for (int c = 0; c < kDim; ++c) v += params[op][r * kDim + c] * node[from][c];
            v = std::tanh(v);
          }
          sum[r] += v;
        }
      }
      node[to] = sum;
    }
    return node[3];
  };
  std::map<std::string, std::array<double, kDim>> seen;
  std::set<std::vector<long long>> numeric_classes;
  for_each_cell(space, [&](const CellGraph &c) {
    const auto out = evaluate(c);
    std::vector<long long> rounded;
    for (double v : out) rounded.push_back(std::llround(v * 1e9));
    numeric_classes.insert(rounded);
    auto [it, fresh] = seen.try_emplace(equivalence_key(c, space), out);
    if (!fresh) {
      for (int r = 0; r < kDim; ++r) EXPECT_NEAR(it->second[r], out[r], 1e-9);
    }
    return true;
  });
  // Full functional equivalence merges strictly more (zero terms vanish).
  EXPECT_EQ(numeric_classes.size(), 4930u);
}

TEST(Equivalence, UnsupportedWithoutNoneOp) {
  try {
    equivalence_key(CellGraph{{0, 0, 0}, {}, {}, {}}, make_synthetic(3, 2));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::unsupported_reduction);
  }
}

TEST(Encoding, OneHotBlocks) {
  const auto tiny = make_synthetic(1, 2);
  EXPECT_EQ(encode_onehot(CellGraph{{1}, {}, {}, {}}, tiny), (std::vector<double>{0, 1}));
  const auto space = make_nb201_like();
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto v = encode_onehot(sample_uniform(space, rng), space);
    EXPECT_EQ(v.size(), 30u);
    EXPECT_EQ(std::count(v.begin(), v.end(), 1.0), 6);
  }
  const auto toy = make_synthetic(3, 2);
  std::set<std::vector<double>> vectors;
  for (const auto &c : all_cells(toy)) vectors.insert(encode_onehot(c, toy));
  EXPECT_EQ(vectors.size(), 8u);
}

TEST(Encoding, WidthFormulaAndAdjacencyBits) {
  const auto asr = make_asr_like();
  EXPECT_EQ(onehot_width(asr), 3u * 6u + 6u);
  const auto nb101 = make_nb101_like(7, 9, 3);
  EXPECT_EQ(onehot_width(nb101), 5u * 3u + 21u);
  Rng rng(3);
  const auto cell = sample_uniform(nb101, rng);
  const auto v = encode_onehot(cell, nb101);
  for (std::size_t i = 0; i < 21; ++i) EXPECT_EQ(v[15 + i], cell.active[i]);
}

namespace {

// Exact canonical form: prune to the input-to-output subgraph, then take the
// smallest (adjacency, labels) encoding over all orders of interior nodes.
std::string iso_canonical(const CellGraph &cell, const SearchSpaceDef &space) {
  const int n = space.num_nodes;
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  for (std::size_t e = 0; e < space.edges.size(); ++e)
    if (cell.active[e]) adj[space.edges[e].from][space.edges[e].to] = 1;
  std::vector<int> fwd(n, 0), bwd(n, 0);
  fwd[0] = 1;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (fwd[u] && adj[u][v]) fwd[v] = 1;
  bwd[n - 1] = 1;
  for (int v = n - 1; v >= 0; --v)
    for (int u = 0; u < n; ++u)
      if (bwd[v] && adj[u][v]) bwd[u] = 1;
  std::vector<int> interior;
  for (int v = 1; v + 1 < n; ++v)
    if (fwd[v] && bwd[v]) interior.push_back(v);
  std::sort(interior.begin(), interior.end());
  std::string best;
  do {
    std::vector<int> order{0};
    order.insert(order.end(), interior.begin(), interior.end());
    order.push_back(n - 1);
    std::string s;
    for (int a : order) {
      for (int b : order) s += adj[a][b] ? '1' : '0';
      s += '/';
    }
    for (int v : interior) s += std::to_string(cell.ops[v - 1]) + ",";
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(interior.begin(), interior.end()));
  return best;
}

}  // namespace

TEST(GraphHash, MatchesExactIsomorphismClassesOnSmallSpaces) {
  for (auto [nodes, max_edges, ops] : {std::tuple{4, 6, 2}, std::tuple{5, 6, 2}, std::tuple{5, 10, 3}}) {
    const auto space = make_nb101_like(nodes, max_edges, ops);
    std::map<std::string, std::uint64_t> form_hash;
    std::set<std::uint64_t> hashes;
    for_each_cell(space, [&](const CellGraph &c) {
      const auto form = iso_canonical(c, space);
      const auto h = graph_hash(c, space);
      auto [it, fresh] = form_hash.emplace(form, h);
      EXPECT_EQ(it->second, h) << "isomorphic cells hash differently";
      if (fresh) EXPECT_TRUE(hashes.insert(h).second) << "distinct classes share a hash";
      return true;
    });
    EXPECT_EQ(count_unique_graphs(space), form_hash.size()) << space.space_id;
  }
}

TEST(GraphHash, InvariantUnderInteriorRelabelingAndDanglingNodes) {
  const auto space = make_nb101_like(5, 9, 3);
  auto cell_of = [&](const std::vector<Edge> &edges, std::vector<int> ops) {
    CellGraph c;
    c.ops = std::move(ops);
    c.active.assign(space.edges.size(), 0);
    for (auto e : edges) c.active[*space.edge_index(e)] = 1;
    return c;
  };
  // Chain in -> x -> y -> out, realized on different interior nodes.
  const auto a = cell_of({{0, 1}, {1, 2}, {2, 4}}, {0, 1, 2});
  const auto b = cell_of({{0, 1}, {1, 3}, {3, 4}}, {0, 0, 1});
  const auto swapped = cell_of({{0, 1}, {1, 2}, {2, 4}}, {1, 0, 2});
  EXPECT_EQ(graph_hash(a, space), graph_hash(b, space));
  EXPECT_NE(graph_hash(a, space), graph_hash(swapped, space));
  // Nodes off every path contribute nothing.
  const auto c = cell_of({{0, 1}, {1, 4}, {0, 3}}, {2, 0, 0});
  const auto d = cell_of({{0, 2}, {2, 4}, {3, 4}}, {1, 2, 1});
  EXPECT_EQ(graph_hash(c, space), graph_hash(d, space));
  EXPECT_THROW(graph_hash(cell_of({{0, 1}}, {0, 0, 0}), space), Error);
  EXPECT_THROW(graph_hash(CellGraph{{0, 0, 0, 0, 0, 0}, {}, {}, {}}, make_nb201_like()), Error);
}
