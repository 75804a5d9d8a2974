#include "bdf/format.hpp"

#include <algorithm>
#include <sstream>

namespace bdf {

std::string SyntaxError::message() const {
  std::ostringstream os;
  os << "syntax error at line " << line << ", column " << column
     << ": expected " << expected;
  return os.str();
}

namespace {

ParseResult err(int line, int col, const std::string& expected) {
  ParseResult r;
  r.error = SyntaxError{line, col, expected};
  return r;
}

bool parse_kv(const std::string& tok, std::string& k, std::string& v) {
  auto eq = tok.find('=');
  if (eq == std::string::npos) return false;
  k = tok.substr(0, eq);
  v = tok.substr(eq + 1);
  return true;
}

}  // namespace

ParseResult parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  bool header = false;
  DiagramDocument doc;
  struct DefLine {
    int level;
    RadialSign collapse;
  };
  std::vector<StrandAttr> strands;
  std::vector<DefLine> defs;
  std::vector<std::string> script_lines;
  bool have_seed = false;

  while (std::getline(is, line)) {
    ln++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (!header) {
      int v = 0;
      if (word != "bdf" || !(ls >> v) || v != 1)
        return err(ln, 1, "header `bdf 1`");
      header = true;
      doc.version = v;
      continue;
    }
    if (word == "strand") {
      StrandAttr a;
      if (!(ls >> a.id)) return err(ln, 8, "strand id");
      bool have_kind = false, have_sign = false;
      std::string tok, k, v;
      while (ls >> tok) {
        if (!parse_kv(tok, k, v)) return err(ln, 1, "key=value");
        if (k == "kind") {
          if (v == "indef") a.kind = StrandKind::Indefinite;
          else if (v == "def") a.kind = StrandKind::Definite;
          else return err(ln, 1, "kind=indef|def");
          have_kind = true;
        } else if (k == "sign") {
          if (v == "N") a.sign = RadialSign::TowardNorth;
          else if (v == "S") a.sign = RadialSign::TowardSouth;
          else return err(ln, 1, "sign=N|S");
          have_sign = true;
        } else if (k == "effect") {
          if (v == "ns") a.effect = ComponentEffect::Nonseparating;
          else if (v == "sep") a.effect = ComponentEffect::Separating;
          else return err(ln, 1, "effect=ns|sep");
        } else if (k == "twist") {
          if (v == "0") a.twist = Twist::Untwisted;
          else if (v == "1") a.twist = Twist::Twisted;
          else return err(ln, 1, "twist=0|1");
        } else {
          return err(ln, 1, "strand attribute");
        }
      }
      if (!have_kind || !have_sign) return err(ln, 1, "kind= and sign=");
      if (a.kind == StrandKind::Definite) {
        defs.push_back({static_cast<int>(strands.size()), a.sign});
      } else {
        strands.push_back(a);
      }
    } else if (word == "event") {
      std::string tag;
      int pos;
      if (!(ls >> tag >> pos)) return err(ln, 7, "event tag and position");
      Event ev;
      ev.pos = pos;
      if (tag == "cross") ev.tag = EventTag::Cross;
      else if (tag == "min") ev.tag = EventTag::Min;
      else if (tag == "max") ev.tag = EventTag::Max;
      else if (tag == "cuspl") ev.tag = EventTag::CuspL;
      else if (tag == "cuspr") ev.tag = EventTag::CuspR;
      else return err(ln, 7, "cross|min|max|cuspl|cuspr");
      std::string tok, k, v;
      while (ls >> tok) {
        if (!parse_kv(tok, k, v) || k != "upper") return err(ln, 1, "upper=N|S");
        if (v == "N") ev.upper = RadialSign::TowardNorth;
        else if (v == "S") ev.upper = RadialSign::TowardSouth;
        else return err(ln, 1, "upper=N|S");
      }
      doc.diagram.events.push_back(ev);
    } else if (word == "mark") {
      std::string kind;
      LefschetzMark m;
      if (!(ls >> kind >> m.after_event >> m.gap) || kind != "lef")
        return err(ln, 6, "mark lef <event-index> <gap>");
      doc.diagram.marks.push_back(m);
    } else if (word == "defcircle") {
      int level;
      std::string tok, k, v;
      if (!(ls >> level)) return err(ln, 11, "defcircle level");
      if (!(ls >> tok) || !parse_kv(tok, k, v) || k != "collapse")
        return err(ln, 1, "collapse=N|S");
      RadialSign c;
      if (v == "N") c = RadialSign::TowardNorth;
      else if (v == "S") c = RadialSign::TowardSouth;
      else return err(ln, 1, "collapse=N|S");
      defs.push_back({level, c});
    } else if (word == "seed") {
      std::string tok, k, v;
      while (ls >> tok) {
        if (!parse_kv(tok, k, v)) return err(ln, 1, "chi=/comp=");
        try {
          if (k == "chi") doc.diagram.seed.euler = std::stoi(v);
          else if (k == "comp") doc.diagram.seed.components = std::stoi(v);
          else return err(ln, 1, "chi=/comp=");
        } catch (...) {
          return err(ln, 1, "integer");
        }
      }
      have_seed = true;
    } else if (word == "meta") {
      std::string tok, k, v;
      if (!(ls >> tok) || !parse_kv(tok, k, v)) return err(ln, 6, "key=value");
      doc.diagram.meta.set(k, v);
    } else if (word == "script") {
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest[0] == ' ') rest = rest.substr(1);
      script_lines.push_back(rest);
    } else {
      return err(ln, 1, "directive");
    }
  }
  if (!header) return err(ln + 1, 1, "header `bdf 1`");
  if (!have_seed) return err(ln + 1, 1, "seed line");

  // interleave definite circles by level among the indefinite strands
  doc.diagram.base.clear();
  std::vector<DefLine> pending = defs;
  std::stable_sort(
      pending.begin(), pending.end(),
      [](const DefLine& a, const DefLine& b) { return a.level < b.level; });
  size_t di = 0;
  int maxid = -1;
  for (const auto& a : strands) maxid = std::max(maxid, a.id);
  for (size_t si = 0; si <= strands.size(); ++si) {
    while (di < pending.size() &&
           pending[di].level <= static_cast<int>(si) &&
           (pending[di].level == static_cast<int>(si) ||
            si == strands.size())) {
      StrandAttr a;
      a.id = ++maxid;
      a.kind = StrandKind::Definite;
      a.sign = pending[di].collapse;
      doc.diagram.base.push_back(a);
      di++;
    }
    if (si < strands.size()) doc.diagram.base.push_back(strands[si]);
  }

  if (!script_lines.empty()) {
    std::string joined;
    for (const auto& l : script_lines) joined += l + "\n";
    auto sc = MoveScript::parse(joined);
    if (!sc) return err(ln, 1, "embedded script");
    doc.script = *sc;
  }
  return ParseResult{doc, std::nullopt};
}

std::string serialize(const DiagramDocument& doc) {
  std::ostringstream os;
  os << "bdf 1\n";
  int level = 0;
  std::vector<std::pair<int, RadialSign>> defs;
  for (const auto& a : doc.diagram.base) {
    if (a.kind == StrandKind::Definite) {
      defs.push_back({level, a.sign});
      continue;
    }
    level++;
    os << "strand " << a.id << " kind=indef sign="
       << (a.sign == RadialSign::TowardNorth ? 'N' : 'S');
    if (a.effect == ComponentEffect::Separating) os << " effect=sep";
    if (a.twist) os << " twist=" << (*a.twist == Twist::Twisted ? 1 : 0);
    os << "\n";
  }
  for (const auto& e : doc.diagram.events) {
    os << "event ";
    switch (e.tag) {
      case EventTag::Cross: os << "cross " << e.pos; break;
      case EventTag::Min:
        os << "min " << e.pos
           << " upper=" << (e.upper == RadialSign::TowardNorth ? 'N' : 'S');
        break;
      case EventTag::Max:
        os << "max " << e.pos
           << " upper=" << (e.upper == RadialSign::TowardNorth ? 'N' : 'S');
        break;
      case EventTag::CuspL: os << "cuspl " << e.pos; break;
      case EventTag::CuspR: os << "cuspr " << e.pos; break;
    }
    os << "\n";
  }
  for (const auto& dl : defs)
    os << "defcircle " << dl.first << " collapse="
       << (dl.second == RadialSign::TowardNorth ? 'N' : 'S') << "\n";
  for (const auto& m : doc.diagram.marks)
    os << "mark lef " << m.after_event << " " << m.gap << "\n";
  os << "seed chi=" << doc.diagram.seed.euler
     << " comp=" << doc.diagram.seed.components << "\n";
  for (const auto& [k, v] : doc.diagram.meta.kv)
    os << "meta " << k << "=" << v << "\n";
  if (doc.script) {
    std::istringstream sl(doc.script->serialize());
    std::string line;
    while (std::getline(sl, line)) os << "script " << line << "\n";
  }
  return os.str();
}

}  // namespace bdf
