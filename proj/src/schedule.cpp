// Copyright 2026 The lgtstator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lgt/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace lgt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string orient_text(int o) { return o > 0 ? "+1" : "-1"; }

std::string ancilla_suffix(std::size_t k) {
  return k == 0 ? std::string() : " ancilla=" + std::to_string(k);
}

std::string site_text(const std::variant<Vertex, Link>& site) {
  if (const auto* v = std::get_if<Vertex>(&site)) return "vertex=" + to_string(*v);
  return "link=" + to_string(std::get<Link>(site));
}

// --- parsing -------------------------------------------------------------

struct Fields {
  std::vector<std::string> words;            // bare tokens after the keyword
  std::map<std::string, std::string> named;  // key=value tokens
};

Fields split_fields(const std::vector<std::string>& tokens, std::size_t line) {
  Fields f;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string::npos) {
      f.words.push_back(tokens[i]);
    } else {
      const std::string key = tokens[i].substr(0, eq);
      if (!f.named.emplace(key, tokens[i].substr(eq + 1)).second) {
        throw ScheduleParseError(line, "duplicate field '" + key + "'");
      }
    }
  }
  return f;
}

int parse_int(std::string_view s, std::size_t line) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ScheduleParseError(line, "expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<int> parse_ints(std::string_view s, std::size_t arity, std::size_t line) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw ScheduleParseError(line, "expected a parenthesized tuple, got '" + std::string(s) + "'");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<int> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_int(s.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (out.size() != arity) {
    throw ScheduleParseError(line, "expected " + std::to_string(arity) + " tuple entries");
  }
  return out;
}

class FieldReader {
 public:
  FieldReader(Fields fields, std::size_t line) : f_(std::move(fields)), line_(line) {}

  std::string take(const std::string& key) {
    const auto it = f_.named.find(key);
    if (it == f_.named.end()) throw ScheduleParseError(line_, "missing field '" + key + "'");
    std::string v = it->second;
    f_.named.erase(it);
    return v;
  }
  bool has(const std::string& key) const { return f_.named.count(key) != 0; }

  Vertex vertex() {
    const auto t = parse_ints(take("vertex"), 2, line_);
    return {t[0], t[1]};
  }
  Link link() {
    const auto t = parse_ints(take("link"), 3, line_);
    if (t[2] != 1 && t[2] != 2) throw ScheduleParseError(line_, "link direction must be 1 or 2");
    return {{t[0], t[1]}, t[2]};
  }
  int orientation() {
    const int o = parse_int(take("orient"), line_);
    if (o != 1 && o != -1) throw ScheduleParseError(line_, "orient must be +1 or -1");
    return o;
  }
  std::size_t ancilla() {
    if (!has("ancilla")) return 0;
    const int k = parse_int(take("ancilla"), line_);
    if (k < 0) throw ScheduleParseError(line_, "ancilla index must be non-negative");
    return static_cast<std::size_t>(k);
  }
  bool flag(const std::string& word) {
    const auto it = std::find(f_.words.begin(), f_.words.end(), word);
    if (it == f_.words.end()) return false;
    f_.words.erase(it);
    return true;
  }
  std::string word() {
    if (f_.words.empty()) throw ScheduleParseError(line_, "missing operand");
    std::string w = f_.words.front();
    f_.words.erase(f_.words.begin());
    return w;
  }
  void finish() const {
    if (!f_.words.empty()) throw ScheduleParseError(line_, "unexpected token '" + f_.words.front() + "'");
    if (!f_.named.empty()) {
      throw ScheduleParseError(line_, "unexpected field '" + f_.named.begin()->first + "'");
    }
  }

 private:
  Fields f_;
  std::size_t line_;
};

ScheduleStep parse_step(const std::vector<std::string>& tokens, std::size_t line) {
  const std::string& kw = tokens[0];
  FieldReader r(split_fields(tokens, line), line);
  ScheduleStep step;
  if (kw == "PREPARE") {
    const std::string what = r.word();
    if (what != "qudit" && what != "chi") throw ScheduleParseError(line, "PREPARE expects qudit or chi");
    step = PrepareAncilla{what == "qudit" ? AncillaKind::Qudit : AncillaKind::Fermion, r.ancilla()};
  } else if (kw == "MOVE") {
    MoveAncilla m;
    if (r.has("vertex")) {
      m.site = r.vertex();
    } else {
      m.site = r.link();
    }
    m.ancilla = r.ancilla();
    step = m;
  } else if (kw == "ENTANGLE") {
    EntangleW e;
    e.link = r.link();
    e.orientation = r.orientation();
    e.adjoint = r.flag("adjoint");
    e.ancilla = r.ancilla();
    step = e;
  } else if (kw == "SWAP") {
    SwapFermions s;
    s.vertex = r.vertex();
    s.adjoint = r.flag("adjoint");
    step = s;
  } else if (kw == "DEGAUGE") {
    DeGauge d;
    d.link = r.link();
    d.orientation = r.orientation();
    d.adjoint = r.flag("adjoint");
    step = d;
  } else if (kw == "ROTATE") {
    Rotate rot;
    rot.vertex = r.vertex();
    const std::string axis = r.take("axis");
    if (axis != "x" && axis != "y") throw ScheduleParseError(line, "axis must be x or y");
    rot.axis = axis == "y" ? RotationAxis::Y : RotationAxis::X;
    step = rot;
  } else if (kw == "READOUT") {
    const std::string what = r.word();
    if (what == "trU") {
      step = ReadoutTrU{r.ancilla()};
    } else if (what == "ndiff") {
      step = ReadoutNumberDiff{r.vertex()};
    } else {
      throw ScheduleParseError(line, "READOUT expects trU or ndiff");
    }
  } else if (kw == "EXCITE") {
    const std::string what = r.word();
    LocalExcite e;
    if (what == "trU") {
      e.kind = LocalExcite::Kind::TraceU;
      e.ancilla = r.ancilla();
    } else if (what == "hop") {
      e.kind = LocalExcite::Kind::Hopping;
      e.vertex = r.vertex();
      try {
        e.op = parse_meson_operator(r.take("op"));
      } catch (const std::invalid_argument& err) {
        throw ScheduleParseError(line, err.what());
      }
    } else {
      throw ScheduleParseError(line, "EXCITE expects trU or hop");
    }
    step = e;
  } else {
    throw ScheduleParseError(line, "unknown step '" + kw + "'");
  }
  r.finish();
  return step;
}

bool adjacent(const Lattice& lat, const std::variant<Vertex, Link>& a,
              const std::variant<Vertex, Link>& b) {
  auto ends = [&](const std::variant<Vertex, Link>& s) -> std::vector<Vertex> {
    if (const auto* v = std::get_if<Vertex>(&s)) return {*v};
    const Link& l = std::get<Link>(s);
    return {l.site, lat.link_target(l)};
  };
  if (a == b) return true;
  const auto ea = ends(a);
  const auto eb = ends(b);
  const bool a_vertex = std::holds_alternative<Vertex>(a);
  const bool b_vertex = std::holds_alternative<Vertex>(b);
  if (a_vertex && b_vertex) {
    for (int dir = 1; dir <= 2; ++dir) {
      for (int sign : {-1, 1}) {
        if (lat.neighbor(ea[0], dir, sign) == eb[0]) return true;
      }
    }
    return false;
  }
  for (const Vertex& u : ea) {
    for (const Vertex& w : eb) {
      if (u == w) return true;
    }
  }
  return false;
}

std::string site_name(const std::variant<Vertex, Link>& s) {
  if (const auto* v = std::get_if<Vertex>(&s)) return "vertex " + to_string(*v);
  return "link " + to_string(std::get<Link>(s));
}

}  // namespace

std::size_t GateSchedule::gate_count() const {
  std::size_t n = 0;
  for (const auto& s : steps) {
    n += std::holds_alternative<EntangleW>(s) || std::holds_alternative<SwapFermions>(s) ||
                 std::holds_alternative<DeGauge>(s) || std::holds_alternative<Rotate>(s) ||
                 std::holds_alternative<LocalExcite>(s)
             ? 1
             : 0;
  }
  return n;
}

std::string format_step(const ScheduleStep& step) {
  return std::visit(
      Overloaded{
          [](const PrepareAncilla& s) {
            return std::string("PREPARE ") + (s.kind == AncillaKind::Qudit ? "qudit" : "chi") +
                   ancilla_suffix(s.ancilla);
          },
          [](const MoveAncilla& s) { return "MOVE " + site_text(s.site) + ancilla_suffix(s.ancilla); },
          [](const EntangleW& s) {
            return "ENTANGLE link=" + to_string(s.link) + " orient=" + orient_text(s.orientation) +
                   (s.adjoint ? " adjoint" : "") + ancilla_suffix(s.ancilla);
          },
          [](const SwapFermions& s) {
            return "SWAP vertex=" + to_string(s.vertex) + (s.adjoint ? " adjoint" : "");
          },
          [](const DeGauge& s) {
            return "DEGAUGE link=" + to_string(s.link) + " orient=" + orient_text(s.orientation) +
                   (s.adjoint ? " adjoint" : "");
          },
          [](const Rotate& s) {
            return "ROTATE vertex=" + to_string(s.vertex) +
                   (s.axis == RotationAxis::Y ? " axis=y" : " axis=x");
          },
          [](const ReadoutTrU& s) { return "READOUT trU" + ancilla_suffix(s.ancilla); },
          [](const ReadoutNumberDiff& s) { return "READOUT ndiff vertex=" + to_string(s.vertex); },
          [](const LocalExcite& s) {
            if (s.kind == LocalExcite::Kind::TraceU) return "EXCITE trU" + ancilla_suffix(s.ancilla);
            return "EXCITE hop vertex=" + to_string(s.vertex) + " op=" + std::string(to_string(s.op));
          },
      },
      step);
}

std::string format_schedule(const GateSchedule& schedule) {
  std::ostringstream out;
  out << "# lgtstator schedule v1\n";
  out << "GROUP " << schedule.group << "\n";
  out << "LATTICE " << schedule.lx << " " << schedule.ly << " " << to_string(schedule.boundary) << "\n";
  out << "REQUEST " << schedule.request << "\n";
  for (const auto& s : schedule.steps) out << format_step(s) << "\n";
  return out.str();
}

GateSchedule parse_schedule(std::string_view text) {
  GateSchedule schedule;
  bool have_group = false;
  bool have_lattice = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    const std::string& kw = tokens[0];

    if (kw == "GROUP") {
      if (tokens.size() != 2) throw ScheduleParseError(line_no, "GROUP takes one label");
      schedule.group = tokens[1];
      have_group = true;
    } else if (kw == "LATTICE") {
      if (tokens.size() != 4) throw ScheduleParseError(line_no, "LATTICE takes lx ly boundary");
      schedule.lx = parse_int(tokens[1], line_no);
      schedule.ly = parse_int(tokens[2], line_no);
      try {
        schedule.boundary = parse_boundary(tokens[3]);
      } catch (const std::invalid_argument& err) {
        throw ScheduleParseError(line_no, err.what());
      }
      have_lattice = true;
    } else if (kw == "REQUEST") {
      const auto pos = line.find("REQUEST") + 7;
      const auto start = line.find_first_not_of(" \t", pos);
      schedule.request = start == std::string::npos ? "" : line.substr(start);
    } else {
      if (!have_group || !have_lattice) {
        throw ScheduleParseError(line_no, "GROUP and LATTICE must precede the steps");
      }
      schedule.steps.push_back(parse_step(tokens, line_no));
    }
  }
  if (!have_group || !have_lattice) throw ScheduleParseError(line_no, "missing GROUP or LATTICE header");
  return schedule;
}

void check_locality(const GateSchedule& schedule, const Lattice& lattice) {
  std::map<std::size_t, std::variant<Vertex, Link>> position;
  std::size_t index = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("step " + std::to_string(index) + " (" +
                                format_step(schedule.steps[index]) + "): " + what);
  };
  auto require_at = [&](std::size_t ancilla, const std::variant<Vertex, Link>& site) {
    const auto it = position.find(ancilla);
    if (it == position.end()) fail("ancilla " + std::to_string(ancilla) + " has not been placed");
    if (it->second != site) fail("ancilla is at " + site_name(it->second) + ", not at " + site_name(site));
  };
  auto require_link = [&](Link l) {
    if (!lattice.has_link(l)) fail("link is not on the lattice");
  };
  auto require_vertex = [&](Vertex v) {
    if (!lattice.contains(v)) fail("vertex is not on the lattice");
  };

  for (; index < schedule.steps.size(); ++index) {
    std::visit(Overloaded{
                   [&](const PrepareAncilla&) {},
                   [&](const MoveAncilla& s) {
                     if (const auto* v = std::get_if<Vertex>(&s.site)) require_vertex(*v);
                     if (const auto* l = std::get_if<Link>(&s.site)) require_link(*l);
                     const auto it = position.find(s.ancilla);
                     if (it != position.end() && !adjacent(lattice, it->second, s.site)) {
                       fail("move from " + site_name(it->second) + " is not to an adjacent site");
                     }
                     position[s.ancilla] = s.site;
                   },
                   [&](const EntangleW& s) {
                     require_link(s.link);
                     require_at(s.ancilla, s.link);
                   },
                   [&](const SwapFermions& s) {
                     require_vertex(s.vertex);
                     require_at(0, s.vertex);
                   },
                   [&](const DeGauge& s) {
                     require_link(s.link);
                     require_at(0, s.link);
                   },
                   [&](const Rotate& s) {
                     require_vertex(s.vertex);
                     require_at(0, s.vertex);
                   },
                   [&](const ReadoutTrU&) {},
                   [&](const ReadoutNumberDiff& s) {
                     require_vertex(s.vertex);
                     require_at(0, s.vertex);
                   },
                   [&](const LocalExcite& s) {
                     if (s.kind == LocalExcite::Kind::Hopping) {
                       require_vertex(s.vertex);
                       require_at(0, s.vertex);
                     }
                   },
               },
               schedule.steps[index]);
  }
}

}  // namespace lgt
