#include "catalog/catalog.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"
#include "graph/neighborhood.hpp"

namespace archbench {

const char *orientation_name(Orientation o) {
  return o == Orientation::higher_better ? "higher-better" : "lower-better";
}

Orientation parse_orientation(const std::string &text) {
  if (text == "higher-better" || text == "max") return Orientation::higher_better;
  if (text == "lower-better" || text == "min") return Orientation::lower_better;
  throw Error(ErrorCode::validation, "unknown metric orientation '" + text + "'");
}

SpaceSize space_size(const SearchSpaceDef &space) {
  double log10 = 0.0;
  long double product = 1.0L;
  auto times = [&](double factor) {
    log10 += std::log10(factor);
    product *= factor;
  };
  const auto vocab = static_cast<double>(space.op_vocab.size());
  for (std::size_t i = 0; i < space.labeled_slot_count(); ++i) times(vocab);
  for (std::size_t i = 0; i < space.aux_edges.size(); ++i) times(2.0);
  for (const auto &slot : space.macro_slots) times(slot.cardinality);
  SpaceSize size;
  if (space.variable_topology) {
    auto topologies = count_valid_topologies(space);
    if (!topologies) {
      times(std::pow(2.0, static_cast<double>(space.edges.size())));
      size.log10 = log10;
      return size;
    }
    times(static_cast<double>(*topologies));
  }
  size.log10 = log10;
  if (product < 1.8e19L) size.exact = static_cast<std::uint64_t>(std::llround(product));
  return size;
}

SearchSpaceDef make_nb201_like() {
  SearchSpaceDef s;
  s.space_id = "nb201";
  s.num_nodes = 4;
  s.edges = complete_dag_edges(4);
  s.op_vocab = {"none", "skip_connect", "nor_conv_1x1", "nor_conv_3x3", "avg_pool_3x3"};
  s.label_mode = LabelMode::edge_ops;
  s.validate();
  return s;
}

SearchSpaceDef make_tnb_micro_like() {
  SearchSpaceDef s = make_nb201_like();
  s.space_id = "tnb-micro";
  s.op_vocab = {"none", "skip_connect", "nor_conv_1x1", "nor_conv_3x3"};
  s.validate();
  return s;
}

SearchSpaceDef make_nb101_like(int nodes, int max_edges, int ops) {
  if (nodes < 3) throw Error(ErrorCode::validation, "nb101-like space needs nodes >= 3");
  if (ops < 1) throw Error(ErrorCode::validation, "nb101-like space needs ops >= 1");
  static const std::vector<std::string> kNames = {"conv3x3-bn-relu", "conv1x1-bn-relu",
                                                  "maxpool3x3"};
  SearchSpaceDef s;
  s.space_id = "nb101-n" + std::to_string(nodes) + "-e" + std::to_string(max_edges) +
               "-o" + std::to_string(ops);
  s.num_nodes = nodes;
  s.edges = complete_dag_edges(nodes);
  for (int i = 0; i < ops; ++i) {
    s.op_vocab.push_back(i < static_cast<int>(kNames.size()) ? kNames[static_cast<std::size_t>(i)]
                                                             : "op" + std::to_string(i));
  }
  s.label_mode = LabelMode::node_ops;
  s.variable_topology = true;
  s.topology.max_edges = max_edges;
  s.topology.require_connectivity = true;
  s.validate();
  return s;
}

SearchSpaceDef make_asr_like() {
  SearchSpaceDef s;
  s.space_id = "asr";
  s.num_nodes = 4;
  s.edges = {{0, 1}, {1, 2}, {2, 3}};
  s.op_vocab = {"linear", "conv5", "conv5d2", "conv7", "conv7d2", "zero"};
  s.label_mode = LabelMode::edge_ops;
  s.aux_edges = complete_dag_edges(4);
  s.validate();
  return s;
}

SearchSpaceDef make_macro_string(const std::vector<int> &slot_cardinalities) {
  SearchSpaceDef s;
  std::ostringstream id;
  id << "macro";
  for (int c : slot_cardinalities) id << "-" << c;
  s.space_id = id.str();
  s.num_nodes = 2;
  s.op_vocab = {"fixed"};
  s.label_mode = LabelMode::edge_ops;
  for (std::size_t i = 0; i < slot_cardinalities.size(); ++i) {
    s.macro_slots.push_back({"slot" + std::to_string(i), slot_cardinalities[i]});
  }
  s.validate();
  return s;
}

SearchSpaceDef make_synthetic(int edges, int ops) {
  if (edges < 0 || ops < 1) throw Error(ErrorCode::validation, "synthetic space needs edges >= 0, ops >= 1");
  SearchSpaceDef s;
  s.space_id = "synthetic-" + std::to_string(edges) + "x" + std::to_string(ops);
  s.num_nodes = edges + 1;
  for (int i = 0; i < edges; ++i) s.edges.push_back({i, i + 1});
  for (int i = 0; i < ops; ++i) s.op_vocab.push_back("op" + std::to_string(i));
  s.label_mode = LabelMode::edge_ops;
  s.validate();
  return s;
}

namespace {

std::vector<int> parse_ints(const std::string &text, char sep) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception &) {
      throw Error(ErrorCode::validation, "bad integer '" + part + "' in space name");
    }
  }
  return out;
}

}  // namespace

SpaceCatalogEntry catalog_entry(const std::string &name) {
  SpaceCatalogEntry e;
  const MetricSpec acc{"valid_acc", Orientation::higher_better};
  if (name == "nb201") {
    e.space = make_nb201_like();
    e.declared_size = "15625";
    e.reported_classes = 6466;
    e.task_names = {"cifar10", "cifar100", "imagenet16-120"};
    e.metrics = {acc};
  } else if (name == "tnb-micro") {
    e.space = make_tnb_micro_like();
    e.declared_size = "4096";
    e.task_names = {"jigsaw", "class_object", "class_scene", "autoencoder",
                    "normal", "room_layout", "segmentsemantic"};
    e.metrics = {acc, {"ssim", Orientation::higher_better},
                 {"neg_loss", Orientation::higher_better}};
  } else if (name == "nb101") {
    e.space = make_nb101_like(7, 9, 3);
    e.declared_size = "423624";
    e.task_names = {"cifar10"};
    e.metrics = {acc};
    e.notes = "declared size counts unique graphs after pruning and isomorphism hashing";
  } else if (name == "nb101-small") {
    e.space = make_nb101_like(5, 7, 3);
    e.declared_size = "unknown";
    e.task_names = {"cifar10"};
    e.metrics = {acc};
    e.notes = "alternative five-node, seven-edge parameterization";
  } else if (name == "asr") {
    e.space = make_asr_like();
    e.declared_size = "8242";
    e.reported_classes = 8242;
    e.task_names = {"timit"};
    e.metrics = {{"per", Orientation::lower_better}};
    e.notes = "raw size 13824; published count reflects deduplication";
  } else if (name == "tnb-macro") {
    e.space = make_macro_string({3, 4, 4, 4, 4, 4});
    e.space.space_id = "tnb-macro";
    e.declared_size = "3256";
    e.task_names = {"jigsaw", "class_object", "class_scene", "autoencoder",
                    "normal", "room_layout", "segmentsemantic"};
    e.metrics = {acc};
    e.notes = "approximate slot model: block count plus per-block stage choices";
  } else if (name.rfind("synthetic-", 0) == 0) {
    const auto dims = parse_ints(name.substr(10), 'x');
    if (dims.size() != 2) throw Error(ErrorCode::validation, "expected synthetic-<edges>x<ops>");
    e.space = make_synthetic(dims[0], dims[1]);
    e.metrics = {acc};
  } else if (name.rfind("macro-", 0) == 0) {
    e.space = make_macro_string(parse_ints(name.substr(6), '-'));
    e.metrics = {acc};
  } else {
    throw Error(ErrorCode::validation, "unknown catalog space '" + name + "'");
  }
  if (e.declared_size.empty()) {
    auto size = space_size(e.space);
    e.declared_size = size.exact ? std::to_string(*size.exact) : "unbounded";
  }
  return e;
}

std::vector<std::string> catalog_names() {
  return {"nb201", "tnb-micro", "nb101", "nb101-small", "asr", "tnb-macro"};
}

}  // namespace archbench
