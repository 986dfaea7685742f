#pragma once

#include <string>
#include <string_view>

#include "graph/search_space.hpp"

namespace archbench {

/// Canonical textual identity of a cell.
///
/// Edge-ops spaces over a complete DAG without aux bits or macro slots use
/// the pipe-and-tilde form, one `|op~src|` group per target node joined by
/// `+`:
///
///     |none~0|+|none~0|none~1|+|none~0|none~1|none~2|
///
/// Every other space uses `key=value;` segments in a fixed order: interior
/// nodes `n<i>=<op>;` (node-ops) or edges `e<u>-<v>=<op>;` (edge-ops),
/// then `adj=<bits>;` for variable topologies, then `aux=<bits>;`, then
/// `m<i>=<choice>;` per macro slot.
class ArchId {
 public:
  ArchId() = default;
  explicit ArchId(std::string text) : text_(std::move(text)) {}

  const std::string &str() const noexcept { return text_; }

  auto operator<=>(const ArchId &) const = default;

 private:
  std::string text_;
};

ArchId canonical_encode(const CellGraph &cell, const SearchSpaceDef &space);

/// Inverse of canonical_encode. Throws ParseError with the character offset
/// of the first malformed token; the decoded cell is validated against the
/// space (Error(invalid_architecture) on constraint violations).
CellGraph decode(std::string_view id, const SearchSpaceDef &space);

/// Whether the space uses the pipe-and-tilde form.
bool uses_pipe_format(const SearchSpaceDef &space);

}  // namespace archbench

template <>
struct std::hash<archbench::ArchId> {
  std::size_t operator()(const archbench::ArchId &id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
