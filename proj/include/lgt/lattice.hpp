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

/**
 * @file
 * Two-dimensional lattice geometry with directed links, and the paths and
 * closed loops that nonlocal operators are defined along.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lgt {

struct Vertex {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Link leaving `site` in positive direction `dir` (1 or 2).
struct Link {
  Vertex site;
  int dir = 1;
  friend auto operator<=>(const Link&, const Link&) = default;
};

enum class Boundary { Open, Periodic };

/// One traversed link. Orientation +1 runs site -> site + e_dir, -1 the reverse.
struct Step {
  Link link;
  int orientation = +1;
  friend bool operator==(const Step&, const Step&) = default;
};

/// A contiguous directed path of lattice links.
struct Path {
  Vertex start;
  std::vector<Step> steps;
  friend bool operator==(const Path&, const Path&) = default;
};

/// A closed path. Constructed only through Lattice validation.
struct Loop {
  Path path;
  friend bool operator==(const Loop&, const Loop&) = default;
};

class Lattice {
 public:
  Lattice(int lx, int ly, Boundary boundary = Boundary::Open);

  [[nodiscard]] int lx() const noexcept { return lx_; }
  [[nodiscard]] int ly() const noexcept { return ly_; }
  [[nodiscard]] Boundary boundary() const noexcept { return boundary_; }

  [[nodiscard]] std::size_t num_vertices() const noexcept {
    return static_cast<std::size_t>(lx_) * static_cast<std::size_t>(ly_);
  }
  [[nodiscard]] std::size_t num_links() const noexcept { return links_.size(); }

  [[nodiscard]] bool contains(Vertex v) const noexcept;
  [[nodiscard]] std::size_t vertex_index(Vertex v) const;
  [[nodiscard]] Vertex vertex_at(std::size_t index) const;
  /// Sublattice parity (x + y) mod 2; 1 is odd.
  [[nodiscard]] static int parity(Vertex v) noexcept { return ((v.x + v.y) % 2 + 2) % 2; }

  [[nodiscard]] bool has_link(Link l) const noexcept;
  [[nodiscard]] std::size_t link_index(Link l) const;
  [[nodiscard]] const Link& link_at(std::size_t index) const { return links_.at(index); }

  /// Neighbour along +-e_dir, wrapped on periodic lattices; nullopt off an open edge.
  [[nodiscard]] std::optional<Vertex> neighbor(Vertex v, int dir, int sign) const;
  [[nodiscard]] Vertex link_target(Link l) const;

  /// Links (v; i) leaving v, and links (v - e_i; i) entering v.
  [[nodiscard]] std::vector<Link> outgoing_links(Vertex v) const;
  [[nodiscard]] std::vector<Link> incoming_links(Vertex v) const;

  /// Corners x of all unit plaquettes; the plaquette spans x, x+e1, x+e1+e2, x+e2.
  [[nodiscard]] std::vector<Vertex> plaquette_corners() const;

  /// Start and end of step k of a path.
  [[nodiscard]] Vertex step_begin(const Step& s) const;
  [[nodiscard]] Vertex step_end(const Step& s) const;

  /// Throws std::invalid_argument on empty or non-contiguous paths.
  void validate_path(const Path& path) const;
  [[nodiscard]] Vertex path_end(const Path& path) const;
  /// Validates contiguity and closure.
  [[nodiscard]] Loop make_loop(Path path) const;
  /// Throws unless the path visits no vertex twice and its endpoints differ.
  void validate_simple_path(const Path& path) const;

 private:
  void check_vertex(Vertex v) const;

  int lx_;
  int ly_;
  Boundary boundary_;
  std::vector<Link> links_;
  std::vector<long> link_lookup_;  // 2 * vertex + (dir - 1) -> link index or -1
};

/// Counterclockwise w x h rectangle starting at `corner`: bottom and right
/// edges traversed +1, top and left edges -1.
Loop rectangle_loop(const Lattice& lattice, Vertex corner, int w, int h);

/// Monotone staircase from x to y; all direction-1 moves come before direction-2 moves.
Path shortest_path(const Lattice& lattice, Vertex from, Vertex to);

/// Cyclic rotation of a loop so that it starts at step `offset`.
Loop rotate_loop(const Lattice& lattice, const Loop& loop, std::size_t offset);

// Config syntax: "rect:(x,y,w,h)" or "steps:(x,y,dir,+1);..." for loops,
// "auto:(x1,y1)->(x2,y2)" or "steps:..." for paths.
Loop parse_loop_spec(const Lattice& lattice, std::string_view spec);
Path parse_path_spec(const Lattice& lattice, std::string_view spec);
std::string format_steps(const Path& path);

std::string to_string(Vertex v);
std::string to_string(Link l);
std::string to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

}  // namespace lgt
