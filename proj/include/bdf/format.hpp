#pragma once

#include <optional>
#include <string>

#include "bdf/diagram.hpp"
#include "bdf/moves.hpp"

namespace bdf {

struct DiagramDocument {
  int version = 1;
  SlicedDiagram diagram;
  std::optional<MoveScript> script;

  friend bool operator==(const DiagramDocument&,
                         const DiagramDocument&) = default;
};

struct SyntaxError {
  int line = 0;
  int column = 0;
  std::string expected;
  std::string message() const;
};

struct ParseResult {
  std::optional<DiagramDocument> doc;
  std::optional<SyntaxError> error;
  explicit operator bool() const { return doc.has_value(); }
};

// Line-based .bdf format:
//   bdf 1
//   strand <id> kind=indef|def sign=N|S [effect=ns|sep] [twist=0|1]
//   event cross|min|max|cuspl|cuspr <i> [upper=N|S]
//   mark lef <event-index> <gap>
//   defcircle <level> collapse=N|S
//   seed chi=<int> comp=<int>
//   meta <key>=<value>
//   script <...>   (optional embedded move script lines)
//   # comments
ParseResult parse(const std::string& text);

// Canonical, byte-stable serialization.
std::string serialize(const DiagramDocument& doc);

inline std::string serialize(const SlicedDiagram& d) {
  DiagramDocument doc;
  doc.diagram = d;
  return serialize(doc);
}

}  // namespace bdf
