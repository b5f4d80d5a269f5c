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

#include "lgt/lattice.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <stdexcept>

namespace lgt {

namespace {

int wrap(int v, int n) { return ((v % n) + n) % n; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view token, std::string_view context) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw std::invalid_argument("expected integer in '" + std::string(context) + "', got '" +
                                std::string(token) + "'");
  }
  return value;
}

// Parses "(a,b,...)" into exactly `arity` integers.
std::vector<int> parse_tuple(std::string_view text, std::size_t arity) {
  const std::string_view context = text;
  text = trim(text);
  if (text.size() < 2 || text.front() != '(' || text.back() != ')') {
    throw std::invalid_argument("expected parenthesised tuple, got '" + std::string(context) + "'");
  }
  text = text.substr(1, text.size() - 2);
  std::vector<int> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_int(text.substr(0, comma), context));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.size() != arity) {
    throw std::invalid_argument("expected " + std::to_string(arity) + " entries in '" +
                                std::string(context) + "'");
  }
  return out;
}

Path parse_step_list(const Lattice& lattice, std::string_view body) {
  Path path;
  bool first = true;
  while (!trim(body).empty()) {
    const auto semi = body.find(';');
    const auto t = parse_tuple(body.substr(0, semi), 4);
    if (t[2] != 1 && t[2] != 2) throw std::invalid_argument("link direction must be 1 or 2");
    if (t[3] != 1 && t[3] != -1) throw std::invalid_argument("orientation must be +1 or -1");
    const Step step{Link{Vertex{t[0], t[1]}, t[2]}, t[3]};
    if (!lattice.has_link(step.link)) {
      throw std::invalid_argument("link " + to_string(step.link) + " is not on the lattice");
    }
    if (first) {
      path.start = lattice.step_begin(step);
      first = false;
    }
    path.steps.push_back(step);
    if (semi == std::string_view::npos) break;
    body.remove_prefix(semi + 1);
  }
  lattice.validate_path(path);
  return path;
}

}  // namespace

Lattice::Lattice(int lx, int ly, Boundary boundary) : lx_(lx), ly_(ly), boundary_(boundary) {
  if (lx < 1 || ly < 1) {
    throw std::invalid_argument("lattice dimensions must be positive, got " + std::to_string(lx) +
                                "x" + std::to_string(ly));
  }
  if (boundary == Boundary::Periodic && (lx < 2 || ly < 2)) {
    throw std::invalid_argument("periodic lattices need at least 2 vertices per direction");
  }
  link_lookup_.assign(2 * num_vertices(), -1);
  for (std::size_t i = 0; i < num_vertices(); ++i) {
    const Vertex v = vertex_at(i);
    for (int dir = 1; dir <= 2; ++dir) {
      if (neighbor(v, dir, +1)) {
        link_lookup_[2 * i + static_cast<std::size_t>(dir - 1)] = static_cast<long>(links_.size());
        links_.push_back(Link{v, dir});
      }
    }
  }
}

bool Lattice::contains(Vertex v) const noexcept {
  return v.x >= 0 && v.x < lx_ && v.y >= 0 && v.y < ly_;
}

void Lattice::check_vertex(Vertex v) const {
  if (!contains(v)) throw std::out_of_range("vertex " + to_string(v) + " is not on the lattice");
}

std::size_t Lattice::vertex_index(Vertex v) const {
  check_vertex(v);
  return static_cast<std::size_t>(v.x) + static_cast<std::size_t>(lx_) * static_cast<std::size_t>(v.y);
}

Vertex Lattice::vertex_at(std::size_t index) const {
  if (index >= num_vertices()) throw std::out_of_range("vertex index out of range");
  return Vertex{static_cast<int>(index % static_cast<std::size_t>(lx_)),
                static_cast<int>(index / static_cast<std::size_t>(lx_))};
}

bool Lattice::has_link(Link l) const noexcept {
  if (!contains(l.site) || (l.dir != 1 && l.dir != 2)) return false;
  const auto i = static_cast<std::size_t>(l.site.x) +
                 static_cast<std::size_t>(lx_) * static_cast<std::size_t>(l.site.y);
  return link_lookup_[2 * i + static_cast<std::size_t>(l.dir - 1)] >= 0;
}

std::size_t Lattice::link_index(Link l) const {
  if (!has_link(l)) throw std::out_of_range("link " + to_string(l) + " is not on the lattice");
  return static_cast<std::size_t>(
      link_lookup_[2 * vertex_index(l.site) + static_cast<std::size_t>(l.dir - 1)]);
}

std::optional<Vertex> Lattice::neighbor(Vertex v, int dir, int sign) const {
  Vertex w = v;
  (dir == 1 ? w.x : w.y) += sign;
  if (boundary_ == Boundary::Periodic) return Vertex{wrap(w.x, lx_), wrap(w.y, ly_)};
  if (!contains(w)) return std::nullopt;
  return w;
}

Vertex Lattice::link_target(Link l) const {
  const auto t = neighbor(l.site, l.dir, +1);
  if (!t) throw std::out_of_range("link " + to_string(l) + " is not on the lattice");
  return *t;
}

std::vector<Link> Lattice::outgoing_links(Vertex v) const {
  check_vertex(v);
  std::vector<Link> out;
  for (int dir = 1; dir <= 2; ++dir) {
    if (has_link(Link{v, dir})) out.push_back(Link{v, dir});
  }
  return out;
}

std::vector<Link> Lattice::incoming_links(Vertex v) const {
  check_vertex(v);
  std::vector<Link> in;
  for (int dir = 1; dir <= 2; ++dir) {
    if (const auto w = neighbor(v, dir, -1)) in.push_back(Link{*w, dir});
  }
  return in;
}

std::vector<Vertex> Lattice::plaquette_corners() const {
  std::vector<Vertex> corners;
  for (std::size_t i = 0; i < num_vertices(); ++i) {
    const Vertex v = vertex_at(i);
    if (has_link(Link{v, 1}) && has_link(Link{v, 2})) {
      const Vertex right = link_target(Link{v, 1});
      const Vertex up = link_target(Link{v, 2});
      if (has_link(Link{right, 2}) && has_link(Link{up, 1})) corners.push_back(v);
    }
  }
  return corners;
}

Vertex Lattice::step_begin(const Step& s) const {
  return s.orientation > 0 ? s.link.site : link_target(s.link);
}

Vertex Lattice::step_end(const Step& s) const {
  return s.orientation > 0 ? link_target(s.link) : s.link.site;
}

void Lattice::validate_path(const Path& path) const {
  if (path.steps.empty()) throw std::invalid_argument("path has no steps");
  check_vertex(path.start);
  Vertex at = path.start;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const Step& s = path.steps[k];
    if (!has_link(s.link)) {
      throw std::invalid_argument("step " + std::to_string(k) + " uses missing link " +
                                  to_string(s.link));
    }
    if (s.orientation != 1 && s.orientation != -1) {
      throw std::invalid_argument("step " + std::to_string(k) + " has orientation other than +-1");
    }
    if (step_begin(s) != at) {
      throw std::invalid_argument("path is not contiguous at step " + std::to_string(k));
    }
    at = step_end(s);
  }
}

Vertex Lattice::path_end(const Path& path) const {
  validate_path(path);
  return step_end(path.steps.back());
}

Loop Lattice::make_loop(Path path) const {
  if (path_end(path) != path.start) {
    throw std::invalid_argument("loop is not closed: ends at " + to_string(path_end(path)) +
                                " instead of " + to_string(path.start));
  }
  return Loop{std::move(path)};
}

void Lattice::validate_simple_path(const Path& path) const {
  validate_path(path);
  std::set<Vertex> seen{path.start};
  for (const auto& s : path.steps) {
    if (!seen.insert(step_end(s)).second) {
      throw std::invalid_argument("meson path revisits vertex " + to_string(step_end(s)));
    }
  }
}

Loop rectangle_loop(const Lattice& lattice, Vertex corner, int w, int h) {
  if (w < 1 || h < 1) {
    throw std::invalid_argument("rectangle needs positive width and height, got " +
                                std::to_string(w) + "x" + std::to_string(h));
  }
  if (!lattice.contains(corner)) {
    throw std::out_of_range("rectangle corner " + to_string(corner) + " is off the lattice");
  }
  if (lattice.boundary() == Boundary::Open) {
    if (corner.x + w >= lattice.lx() || corner.y + h >= lattice.ly()) {
      throw std::out_of_range("rectangle at " + to_string(corner) + " of size " +
                              std::to_string(w) + "x" + std::to_string(h) +
                              " does not fit the lattice");
    }
  } else if (w > lattice.lx() || h > lattice.ly()) {
    throw std::out_of_range("rectangle larger than the periodic lattice");
  }
  auto at = [&](int dx, int dy) {
    return Vertex{((corner.x + dx) % lattice.lx() + lattice.lx()) % lattice.lx(),
                  ((corner.y + dy) % lattice.ly() + lattice.ly()) % lattice.ly()};
  };
  Path path{corner, {}};
  for (int k = 0; k < w; ++k) path.steps.push_back({Link{at(k, 0), 1}, +1});
  for (int k = 0; k < h; ++k) path.steps.push_back({Link{at(w, k), 2}, +1});
  for (int k = 0; k < w; ++k) path.steps.push_back({Link{at(w - 1 - k, h), 1}, -1});
  for (int k = 0; k < h; ++k) path.steps.push_back({Link{at(0, h - 1 - k), 2}, -1});
  return lattice.make_loop(std::move(path));
}

Path shortest_path(const Lattice& lattice, Vertex from, Vertex to) {
  if (!lattice.contains(from) || !lattice.contains(to)) {
    throw std::out_of_range("path endpoints must lie on the lattice");
  }
  if (from == to) throw std::invalid_argument("path endpoints coincide at " + to_string(from));
  Path path{from, {}};
  Vertex at = from;
  while (at.x != to.x) {
    if (to.x > at.x) {
      path.steps.push_back({Link{at, 1}, +1});
      ++at.x;
    } else {
      --at.x;
      path.steps.push_back({Link{at, 1}, -1});
    }
  }
  while (at.y != to.y) {
    if (to.y > at.y) {
      path.steps.push_back({Link{at, 2}, +1});
      ++at.y;
    } else {
      --at.y;
      path.steps.push_back({Link{at, 2}, -1});
    }
  }
  lattice.validate_path(path);
  return path;
}

Loop rotate_loop(const Lattice& lattice, const Loop& loop, std::size_t offset) {
  const auto& steps = loop.path.steps;
  offset %= steps.size();
  Path path{lattice.step_begin(steps[offset]), {}};
  for (std::size_t k = 0; k < steps.size(); ++k) path.steps.push_back(steps[(offset + k) % steps.size()]);
  return lattice.make_loop(std::move(path));
}

Loop parse_loop_spec(const Lattice& lattice, std::string_view spec) {
  spec = trim(spec);
  if (spec.starts_with("rect:")) {
    const auto t = parse_tuple(spec.substr(5), 4);
    return rectangle_loop(lattice, Vertex{t[0], t[1]}, t[2], t[3]);
  }
  if (spec.starts_with("steps:")) return lattice.make_loop(parse_step_list(lattice, spec.substr(6)));
  throw std::invalid_argument("unknown loop spec '" + std::string(spec) +
                              "' (expected rect:(x,y,w,h) or steps:...)");
}

Path parse_path_spec(const Lattice& lattice, std::string_view spec) {
  spec = trim(spec);
  if (spec.starts_with("auto:")) {
    const auto body = spec.substr(5);
    const auto arrow = body.find("->");
    if (arrow == std::string_view::npos) {
      throw std::invalid_argument("auto path needs '->' in '" + std::string(spec) + "'");
    }
    const auto a = parse_tuple(body.substr(0, arrow), 2);
    const auto b = parse_tuple(body.substr(arrow + 2), 2);
    return shortest_path(lattice, Vertex{a[0], a[1]}, Vertex{b[0], b[1]});
  }
  if (spec.starts_with("steps:")) return parse_step_list(lattice, spec.substr(6));
  throw std::invalid_argument("unknown path spec '" + std::string(spec) +
                              "' (expected auto:(x1,y1)->(x2,y2) or steps:...)");
}

std::string format_steps(const Path& path) {
  std::string out = "steps:";
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const auto& s = path.steps[k];
    if (k) out += ';';
    out += "(" + std::to_string(s.link.site.x) + "," + std::to_string(s.link.site.y) + "," +
           std::to_string(s.link.dir) + "," + (s.orientation > 0 ? "+1" : "-1") + ")";
  }
  return out;
}

std::string to_string(Vertex v) {
  return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

std::string to_string(Link l) {
  return "(" + std::to_string(l.site.x) + "," + std::to_string(l.site.y) + "," +
         std::to_string(l.dir) + ")";
}

std::string to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary parse_boundary(std::string_view text) {
  text = trim(text);
  if (text == "open") return Boundary::Open;
  if (text == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("boundary must be 'open' or 'periodic', got '" + std::string(text) + "'");
}

}  // namespace lgt
