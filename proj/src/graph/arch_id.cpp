#include "graph/arch_id.hpp"

#include "common/error.hpp"

namespace archbench {

bool uses_pipe_format(const SearchSpaceDef &space) {
  return space.label_mode == LabelMode::edge_ops && !space.variable_topology &&
         space.aux_edges.empty() && space.macro_slots.empty() &&
         space.num_nodes >= 2 && space.is_complete_dag();
}

namespace {

void append_bits(std::string &out, const std::vector<std::uint8_t> &bits) {
  for (auto b : bits) out.push_back(b ? '1' : '0');
}

std::string encode_pipe(const CellGraph &cell, const SearchSpaceDef &space) {
  std::string out;
  for (int to = 1; to < space.num_nodes; ++to) {
    if (to > 1) out.push_back('+');
    out.push_back('|');
    for (int from = 0; from < to; ++from) {
      const auto slot = *space.edge_index({from, to});
      out += space.op_vocab[static_cast<std::size_t>(cell.ops[slot])];
      out.push_back('~');
      out += std::to_string(from);
      out.push_back('|');
    }
  }
  return out;
}

std::string encode_generic(const CellGraph &cell, const SearchSpaceDef &space) {
  std::string out;
  if (space.label_mode == LabelMode::node_ops) {
    for (std::size_t i = 0; i < cell.ops.size(); ++i) {
      out += "n" + std::to_string(i + 1) + "=" +
             space.op_vocab[static_cast<std::size_t>(cell.ops[i])] + ";";
    }
  } else {
    for (std::size_t i = 0; i < cell.ops.size(); ++i) {
      const auto &e = space.edges[i];
      out += "e" + std::to_string(e.from) + "-" + std::to_string(e.to) + "=" +
             space.op_vocab[static_cast<std::size_t>(cell.ops[i])] + ";";
    }
  }
  if (space.variable_topology) {
    out += "adj=";
    append_bits(out, cell.active);
    out += ";";
  }
  if (!space.aux_edges.empty()) {
    out += "aux=";
    append_bits(out, cell.aux);
    out += ";";
  }
  for (std::size_t i = 0; i < cell.macro.size(); ++i) {
    out += "m" + std::to_string(i) + "=" + std::to_string(cell.macro[i]) + ";";
  }
  return out;
}

// Strict left-to-right scanner over the canonical text.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ == text_.size(); }

  void expect(std::string_view literal) {
    if (text_.substr(pos_, literal.size()) != literal) {
      throw ParseError(pos_, "expected '" + std::string(literal) + "'");
    }
    pos_ += literal.size();
  }

  // Reads up to (not including) any of the stop characters.
  std::string_view until(std::string_view stops) {
    const auto start = pos_;
    while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos) {
      ++pos_;
    }
    if (pos_ == start) throw ParseError(start, "empty token");
    return text_.substr(start, pos_ - start);
  }

  long integer() {
    const auto start = pos_;
    long value = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1'000'000'000) throw ParseError(start, "integer too large");
      ++pos_;
    }
    if (pos_ == start) throw ParseError(start, "expected an integer");
    return value;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

int parse_op(Scanner &scan, std::string_view stops, const SearchSpaceDef &space) {
  const auto at = scan.pos();
  const auto name = scan.until(stops);
  auto idx = space.op_index(name);
  if (!idx) throw ParseError(at, "unknown operation '" + std::string(name) + "'");
  return *idx;
}

std::vector<std::uint8_t> parse_bits(Scanner &scan, std::size_t count) {
  const auto at = scan.pos();
  const auto bits = scan.until(";");
  if (bits.size() != count) {
    throw ParseError(at, "expected " + std::to_string(count) + " bits");
  }
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') throw ParseError(at + i, "expected bit");
    out.push_back(bits[i] == '1');
  }
  return out;
}

CellGraph decode_pipe(std::string_view id, const SearchSpaceDef &space) {
  Scanner scan(id);
  CellGraph cell;
  cell.ops.assign(space.edges.size(), 0);
  for (int to = 1; to < space.num_nodes; ++to) {
    if (to > 1) scan.expect("+");
    scan.expect("|");
    for (int from = 0; from < to; ++from) {
      const int op = parse_op(scan, "~|+", space);
      scan.expect("~");
      const auto at = scan.pos();
      if (scan.integer() != from) {
        throw ParseError(at, "expected source node " + std::to_string(from));
      }
      scan.expect("|");
      cell.ops[*space.edge_index({from, to})] = op;
    }
  }
  if (!scan.done()) throw ParseError(scan.pos(), "trailing characters");
  return cell;
}

CellGraph decode_generic(std::string_view id, const SearchSpaceDef &space) {
  Scanner scan(id);
  CellGraph cell;
  if (space.label_mode == LabelMode::node_ops) {
    for (std::size_t i = 0; i < space.labeled_slot_count(); ++i) {
      scan.expect("n" + std::to_string(i + 1) + "=");
      cell.ops.push_back(parse_op(scan, ";", space));
      scan.expect(";");
    }
  } else {
    for (const auto &e : space.edges) {
      scan.expect("e" + std::to_string(e.from) + "-" + std::to_string(e.to) + "=");
      cell.ops.push_back(parse_op(scan, ";", space));
      scan.expect(";");
    }
  }
  if (space.variable_topology) {
    scan.expect("adj=");
    cell.active = parse_bits(scan, space.edges.size());
    scan.expect(";");
  }
  if (!space.aux_edges.empty()) {
    scan.expect("aux=");
    cell.aux = parse_bits(scan, space.aux_edges.size());
    scan.expect(";");
  }
  for (std::size_t i = 0; i < space.macro_slots.size(); ++i) {
    scan.expect("m" + std::to_string(i) + "=");
    const auto at = scan.pos();
    const long choice = scan.integer();
    if (choice >= space.macro_slots[i].cardinality) {
      throw ParseError(at, "macro choice out of range");
    }
    cell.macro.push_back(static_cast<int>(choice));
    scan.expect(";");
  }
  if (!scan.done()) throw ParseError(scan.pos(), "trailing characters");
  return cell;
}

}  // namespace

ArchId canonical_encode(const CellGraph &cell, const SearchSpaceDef &space) {
  validate_cell(cell, space);
  return ArchId(uses_pipe_format(space) ? encode_pipe(cell, space)
                                        : encode_generic(cell, space));
}

CellGraph decode(std::string_view id, const SearchSpaceDef &space) {
  CellGraph cell = uses_pipe_format(space) ? decode_pipe(id, space)
                                           : decode_generic(id, space);
  validate_cell(cell, space);
  return cell;
}

}  // namespace archbench
