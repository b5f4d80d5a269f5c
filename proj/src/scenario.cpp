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

#include "lgt/scenario.hpp"

#include <unistd.h>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>

#include "json.hpp"

namespace lgt {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Entry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t key_col = 0;
  std::size_t value_col = 0;
};

struct Section {
  std::string id;
  std::size_t line = 0;
  std::vector<Entry> entries;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Runs fn, turning any std::exception into a ConfigError at (line, col).
template <class Fn>
auto at(std::size_t line, std::size_t col, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(line, col, e.what());
  }
}

std::uint64_t parse_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

int parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_double(std::string_view s) {
  const std::string text(trim(s));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("expected a number, got '" + text + "'");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + std::string(s) + "'");
}

std::vector<int> parse_tuple(std::string_view s, std::size_t min_arity, std::size_t max_arity) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
    throw std::invalid_argument("expected a parenthesized tuple, got '" + std::string(s) + "'");
  }
  const std::string_view body = s.substr(1, s.size() - 2);
  std::vector<int> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = body.find(',', pos);
    out.push_back(parse_int(body.substr(pos, comma == std::string_view::npos ? body.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.size() < min_arity || out.size() > max_arity) {
    throw std::invalid_argument("wrong number of entries in '" + std::string(s) + "'");
  }
  return out;
}

Link parse_link(std::string_view s) {
  const auto t = parse_tuple(s, 3, 3);
  if (t[2] != 1 && t[2] != 2) throw std::invalid_argument("link direction must be 1 or 2");
  return {{t[0], t[1]}, t[2]};
}

LinkPreparation parse_link_preparation(const FiniteGroup& group, std::string_view s) {
  s = trim(s);
  if (s == "singlet") return LinkPreparation::singlet();
  return LinkPreparation::of(group.parse_element(s));
}

std::pair<StateKind, std::optional<std::uint64_t>> parse_state_kind(std::string_view s) {
  s = trim(s);
  std::optional<std::uint64_t> seed;
  const auto paren = s.find('(');
  std::string_view name = s;
  if (paren != std::string_view::npos) {
    if (s.back() != ')') throw std::invalid_argument("unbalanced parenthesis in state");
    seed = parse_u64(s.substr(paren + 1, s.size() - paren - 2));
    name = trim(s.substr(0, paren));
  }
  StateKind kind;
  if (name == "product") {
    kind = StateKind::Product;
  } else if (name == "staggered_vacuum") {
    kind = StateKind::StaggeredVacuum;
  } else if (name == "random_gauge_invariant") {
    kind = StateKind::RandomGaugeInvariant;
  } else if (name == "random") {
    kind = StateKind::Random;
  } else {
    throw std::invalid_argument("unknown state '" + std::string(name) +
                                "' (expected product, staggered_vacuum, random_gauge_invariant "
                                "or random)");
  }
  if (seed && (kind == StateKind::Product || kind == StateKind::StaggeredVacuum)) {
    throw std::invalid_argument("only random states take a seed");
  }
  return {kind, seed};
}

std::string_view to_string(StateKind k) {
  switch (k) {
    case StateKind::Product: return "product";
    case StateKind::StaggeredVacuum: return "staggered_vacuum";
    case StateKind::RandomGaugeInvariant: return "random_gauge_invariant";
    case StateKind::Random: return "random";
  }
  return "?";
}

std::string_view to_string(RequestKind k) {
  switch (k) {
    case RequestKind::Wilson: return "wilson";
    case RequestKind::Meson: return "meson";
    case RequestKind::Hamiltonian: return "hamiltonian";
  }
  return "?";
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.') return false;
  }
  return true;
}

void split_sections(std::string_view text, std::vector<Entry>& globals, std::vector<Section>& sections) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string_view body = trim(raw);
    if (body.empty()) continue;
    const std::size_t col = static_cast<std::size_t>(body.data() - raw.data()) + 1;

    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(line_no, col, "section header must end with ']'");
      const std::string_view inner = trim(body.substr(1, body.size() - 2));
      if (inner.substr(0, 8) != "request " && inner.substr(0, 8) != "request\t") {
        throw ConfigError(line_no, col + 1, "expected '[request <id>]'");
      }
      const std::string_view id = trim(inner.substr(8));
      const std::size_t id_col = static_cast<std::size_t>(id.data() - raw.data()) + 1;
      if (!valid_id(id)) {
        throw ConfigError(line_no, id_col,
                          "request id must be letters, digits, '_', '-' or '.', got '" +
                              std::string(id) + "'");
      }
      for (const auto& s : sections) {
        if (s.id == id) {
          throw ConfigError(line_no, id_col, "duplicate request id '" + std::string(id) +
                                                  "' (first defined on line " +
                                                  std::to_string(s.line) + ")");
        }
      }
      sections.push_back({std::string(id), line_no, {}});
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, col, "expected 'key = value'");
    const std::string_view key = trim(body.substr(0, eq));
    const std::string_view rest = body.substr(eq + 1);
    const std::string_view value = trim(rest);
    if (key.empty()) throw ConfigError(line_no, col, "missing key before '='");
    const std::size_t value_col =
        value.empty() ? col + eq + 1
                      : static_cast<std::size_t>(value.data() - raw.data()) + 1;
    if (value.empty()) throw ConfigError(line_no, value_col, "missing value for '" + std::string(key) + "'");
    Entry e{std::string(key), std::string(value), line_no, col, value_col};
    auto& target = sections.empty() ? globals : sections.back().entries;
    for (const auto& prev : target) {
      if (prev.key == e.key) {
        throw ConfigError(line_no, col, "duplicate key '" + e.key + "' (first set on line " +
                                            std::to_string(prev.line) + ")");
      }
    }
    target.push_back(std::move(e));
  }
}

const Entry* find_entry(const std::vector<Entry>& entries, std::string_view key) {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

RequestConfig parse_request(const Section& section, const Lattice& lattice) {
  RequestConfig r;
  r.id = section.id;
  r.line = section.line;
  const Entry* kind = find_entry(section.entries, "kind");
  if (!kind) throw ConfigError(section.line, 1, "request '" + section.id + "' has no 'kind'");
  at(kind->line, kind->value_col, [&] {
    if (kind->value == "wilson") {
      r.kind = RequestKind::Wilson;
    } else if (kind->value == "meson") {
      r.kind = RequestKind::Meson;
    } else if (kind->value == "hamiltonian") {
      r.kind = RequestKind::Hamiltonian;
    } else {
      throw std::invalid_argument("kind must be wilson, meson or hamiltonian");
    }
  });

  bool has_which = false;
  for (const auto& e : section.entries) {
    at(e.line, e.value_col, [&] {
      if (e.key == "kind") return;
      if (e.key == "loop") {
        if (r.kind != RequestKind::Wilson) throw std::invalid_argument("'loop' is for wilson requests");
        (void)parse_loop_spec(lattice, e.value);
        r.spec = e.value;
      } else if (e.key == "path") {
        if (r.kind != RequestKind::Meson) throw std::invalid_argument("'path' is for meson requests");
        lattice.validate_simple_path(parse_path_spec(lattice, e.value));
        r.spec = e.value;
      } else if (e.key == "mode") {
        r.mode = parse_protocol_mode(e.value);
      } else if (e.key == "which") {
        if (r.kind != RequestKind::Meson) throw std::invalid_argument("'which' is for meson requests");
        r.which = parse_meson_operator(e.value);
        has_which = true;
      } else if (e.key == "update_state") {
        r.update_state = parse_bool(e.value);
      } else {
        throw ConfigError(e.line, e.key_col, "unknown request key '" + e.key + "'");
      }
    });
  }
  if (r.kind == RequestKind::Wilson && r.spec.empty()) {
    throw ConfigError(section.line, 1, "wilson request '" + r.id + "' needs 'loop'");
  }
  if (r.kind == RequestKind::Meson && r.spec.empty()) {
    throw ConfigError(section.line, 1, "meson request '" + r.id + "' needs 'path'");
  }
  if (r.kind == RequestKind::Meson && !has_which) r.which = MesonOperator::M;
  if (r.kind == RequestKind::Hamiltonian && r.mode == ProtocolMode::Excite) {
    throw ConfigError(section.line, 1, "hamiltonian requests only measure");
  }
  if (r.update_state && r.mode != ProtocolMode::Excite) {
    throw ConfigError(section.line, 1, "update_state needs mode = excite");
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

ScenarioConfig parse_scenario(std::string_view text) {
  std::vector<Entry> globals;
  std::vector<Section> sections;
  split_sections(text, globals, sections);

  ScenarioConfig c;
  std::optional<FiniteGroup> group;
  if (const Entry* e = find_entry(globals, "group")) {
    group = at(e->line, e->value_col, [&] { return FiniteGroup::from_label(e->value); });
    c.group = group->label();
  } else {
    group = FiniteGroup::from_label(c.group);
  }

  std::optional<std::uint64_t> inline_seed;
  for (const auto& e : globals) {
    at(e.line, e.value_col, [&] {
      if (e.key == "group") return;
      if (e.key == "lattice") {
        const auto x = e.value.find('x');
        if (x == std::string::npos) throw std::invalid_argument("lattice must look like 3x3");
        c.lx = parse_int(std::string_view(e.value).substr(0, x));
        c.ly = parse_int(std::string_view(e.value).substr(x + 1));
      } else if (e.key == "boundary") {
        c.boundary = parse_boundary(e.value);
      } else if (e.key == "state") {
        std::tie(c.state, inline_seed) = parse_state_kind(e.value);
      } else if (e.key == "seed") {
        c.seed = parse_u64(e.value);
      } else if (e.key == "links") {
        c.product.default_link = parse_link_preparation(*group, e.value);
      } else if (starts_with(e.key, "link.")) {
        // validated against the lattice below
      } else if (e.key == "occupied") {
        // validated against the lattice below
      } else if (e.key == "lambda_b") {
        c.couplings.lambda_b = parse_double(e.value);
      } else if (e.key == "lambda_gm") {
        c.couplings.lambda_gm = parse_double(e.value);
      } else if (starts_with(e.key, "lambda_gm.")) {
        // validated against the lattice below
      } else if (e.key == "crosscheck") {
        c.crosscheck = parse_bool(e.value);
      } else if (e.key == "tolerance") {
        c.tolerance = parse_double(e.value);
        if (c.tolerance <= 0.0) throw std::invalid_argument("tolerance must be positive");
      } else {
        throw ConfigError(e.line, e.key_col, "unknown key '" + e.key + "'");
      }
    });
  }
  if (inline_seed) c.seed = *inline_seed;

  const Entry* lat_entry = find_entry(globals, "lattice");
  const Lattice lattice = at(lat_entry ? lat_entry->line : 1, lat_entry ? lat_entry->value_col : 1,
                             [&] { return Lattice(c.lx, c.ly, c.boundary); });

  for (const auto& e : globals) {
    if (starts_with(e.key, "link.")) {
      const Link l = at(e.line, e.key_col + 5, [&] { return parse_link(e.key.substr(5)); });
      if (!lattice.has_link(l)) {
        throw ConfigError(e.line, e.key_col + 5, "link " + to_string(l) + " is not on the lattice");
      }
      c.product.links[l] = at(e.line, e.value_col, [&] { return parse_link_preparation(*group, e.value); });
    } else if (starts_with(e.key, "lambda_gm.")) {
      const Link l = at(e.line, e.key_col + 10, [&] { return parse_link(e.key.substr(10)); });
      if (!lattice.has_link(l)) {
        throw ConfigError(e.line, e.key_col + 10, "link " + to_string(l) + " is not on the lattice");
      }
      c.couplings.lambda_gm_link[l] = at(e.line, e.value_col, [&] { return parse_double(e.value); });
    } else if (e.key == "occupied") {
      at(e.line, e.value_col, [&] {
        std::string_view rest = e.value;
        while (!trim(rest).empty()) {
          rest = trim(rest);
          const auto close = rest.find(')');
          if (close == std::string_view::npos) throw std::invalid_argument("unbalanced parenthesis");
          const auto t = parse_tuple(rest.substr(0, close + 1), 2, 3);
          const Vertex v{t[0], t[1]};
          const int m = t.size() == 3 ? t[2] : 0;
          if (!lattice.contains(v)) throw std::invalid_argument("vertex " + to_string(v) + " is off the lattice");
          if (m < 0 || static_cast<std::size_t>(m) >= group->rep_dim()) {
            throw std::invalid_argument("component " + std::to_string(m) + " out of range for " +
                                        group->name());
          }
          c.product.occupied.insert({v, static_cast<std::size_t>(m)});
          rest.remove_prefix(close + 1);
          rest = trim(rest);
          if (!rest.empty() && (rest.front() == ';' || rest.front() == ',')) rest.remove_prefix(1);
        }
      });
    }
  }

  for (const auto& s : sections) c.requests.push_back(parse_request(s, lattice));
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

bool ScenarioReport::all_passed() const {
  for (const auto& r : records) {
    if (!r.passed) return false;
  }
  return true;
}

namespace {

struct System {
  FiniteGroup group;
  Lattice lattice;
  LayoutPtr physical;
};

System build_system(const ScenarioConfig& c) {
  FiniteGroup group = FiniteGroup::from_label(c.group);
  Lattice lattice(c.lx, c.ly, c.boundary);
  // Protocols need the ancilla, so guard the larger space before allocating anything.
  const long double needed = required_dimension(group, lattice, true);
  if (needed > static_cast<long double>(kMaxDimension)) {
    (void)build_layout(group, lattice, true);  // throws DimensionError with the full message
  }
  LayoutPtr physical = build_layout(group, lattice, false);
  return {std::move(group), std::move(lattice), std::move(physical)};
}

StateVector initial_state(const ScenarioConfig& c, const System& sys) {
  switch (c.state) {
    case StateKind::Product: return prepare_state(sys.physical, c.product);
    case StateKind::StaggeredVacuum:
      return prepare_state(sys.physical,
                           ProductStateSpec::staggered_vacuum(sys.lattice, sys.group.rep_dim()));
    case StateKind::RandomGaugeInvariant: return gauge_project(random_state(sys.physical, c.seed));
    case StateKind::Random: return random_state(sys.physical, c.seed);
  }
  throw std::logic_error("unhandled state kind");
}

RequestRecord run_request(const RequestConfig& req, const ScenarioConfig& c, const System& sys,
                          const StateVector& state, std::optional<StateVector>* updated) {
  RequestRecord rec;
  rec.id = req.id;
  rec.kind = std::string(to_string(req.kind));
  rec.spec = req.spec;
  rec.mode = std::string(to_string(req.mode));
  rec.which = req.kind == RequestKind::Meson ? std::string(to_string(req.which)) : "";
  const bool check = c.crosscheck;

  auto take_excitation = [&](ExcitationResult ex, std::optional<Complex> oracle) {
    rec.value = inner(state, ex.physical);
    rec.oracle = oracle;
    rec.norm = ex.norm;
    rec.ancilla_overlap = ex.ancilla_overlap;
    rec.gate_count = ex.gate_count;
    rec.wall_seconds = ex.wall_seconds;
    if (oracle) rec.abs_diff = std::max(std::abs(rec.value - *oracle), ex.residual.value_or(0.0));
    rec.passed = !oracle || (rec.abs_diff <= c.tolerance && ex.ancilla_overlap >= 1.0 - c.tolerance);
    if (updated && req.update_state) {
      if (ex.norm < 1e-12) {
        throw std::domain_error("request '" + req.id + "' annihilates the state; cannot update it");
      }
      ex.physical.scale(1.0 / ex.norm);
      updated->emplace(std::move(ex.physical));
    }
  };
  auto take_expectation = [&](const ExpectationResult& r) {
    rec.value = r.value;
    rec.oracle = r.oracle;
    rec.abs_diff = r.abs_diff;
    rec.norm = r.norm;
    rec.gate_count = r.gate_count;
    rec.wall_seconds = r.wall_seconds;
    rec.passed = !r.oracle || r.abs_diff <= c.tolerance;
  };

  switch (req.kind) {
    case RequestKind::Wilson: {
      const Loop loop = parse_loop_spec(sys.lattice, req.spec);
      if (req.mode == ProtocolMode::Measure) {
        take_expectation(run_wilson(state, loop, check));
      } else {
        std::optional<Complex> oracle;
        if (check) oracle = wilson_expectation(state, loop);
        take_excitation(excite_wilson(state, loop, check), oracle);
      }
      break;
    }
    case RequestKind::Meson: {
      const Path path = parse_path_spec(sys.lattice, req.spec);
      if (req.mode == ProtocolMode::Measure) {
        take_expectation(run_meson(state, path, req.which, check));
      } else {
        std::optional<Complex> oracle;
        if (check) oracle = meson_expectation(state, path, req.which);
        take_excitation(excite_meson(state, path, req.which, check), oracle);
      }
      break;
    }
    case RequestKind::Hamiltonian: {
      ExpectationResult total;
      total.value = 0.0;
      total.wall_seconds = 0.0;
      for (std::size_t k = 0; k < sys.lattice.num_links(); ++k) {
        const Link l = sys.lattice.link_at(k);
        const double lambda = c.couplings.gauge_matter(l);
        if (lambda == 0.0) continue;
        const auto r = run_meson(state, Path{l.site, {Step{l, +1}}}, MesonOperator::M, false);
        total.value += lambda * r.value.real();
        total.gate_count += r.gate_count;
        total.wall_seconds += r.wall_seconds;
      }
      if (c.couplings.lambda_b != 0.0) {
        for (const Vertex& corner : sys.lattice.plaquette_corners()) {
          const auto r = run_wilson(state, rectangle_loop(sys.lattice, corner, 1, 1), false);
          total.value += -c.couplings.lambda_b * 2.0 * r.value.real();
          total.gate_count += r.gate_count;
          total.wall_seconds += r.wall_seconds;
        }
      }
      if (check) {
        total.oracle = hamiltonian_expectation(state, c.couplings).total();
        total.abs_diff = std::abs(total.value - *total.oracle);
      }
      take_expectation(total);
      break;
    }
  }
  return rec;
}

ordered_json complex_json(Complex z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; }

ordered_json link_prep_json(const LinkPreparation& p) {
  if (p.kind == LinkPreparation::Kind::Singlet) return "singlet";
  return p.element;
}

ordered_json config_json(const ScenarioConfig& c) {
  ordered_json j;
  j["group"] = c.group;
  j["lattice"] = {{"lx", c.lx}, {"ly", c.ly}, {"boundary", to_string(c.boundary)}};
  ordered_json state;
  state["kind"] = to_string(c.state);
  if (c.state == StateKind::Random || c.state == StateKind::RandomGaugeInvariant) {
    state["seed"] = c.seed;
  }
  if (c.state == StateKind::Product) {
    state["links"] = link_prep_json(c.product.default_link);
    ordered_json overrides = ordered_json::object();
    for (const auto& [l, p] : c.product.links) overrides[to_string(l)] = link_prep_json(p);
    state["link_overrides"] = overrides;
    ordered_json occ = ordered_json::array();
    for (const auto& [v, m] : c.product.occupied) occ.push_back({v.x, v.y, m});
    state["occupied"] = occ;
  }
  j["state"] = state;
  ordered_json couplings;
  couplings["lambda_b"] = c.couplings.lambda_b;
  couplings["lambda_gm"] = c.couplings.lambda_gm;
  ordered_json per_link = ordered_json::object();
  for (const auto& [l, v] : c.couplings.lambda_gm_link) per_link[to_string(l)] = v;
  couplings["lambda_gm_link"] = per_link;
  j["couplings"] = couplings;
  j["crosscheck"] = c.crosscheck;
  j["tolerance"] = c.tolerance;
  ordered_json reqs = ordered_json::array();
  for (const auto& r : c.requests) {
    ordered_json rj;
    rj["id"] = r.id;
    rj["kind"] = to_string(r.kind);
    if (!r.spec.empty()) rj["spec"] = r.spec;
    rj["mode"] = to_string(r.mode);
    if (r.kind == RequestKind::Meson) rj["which"] = to_string(r.which);
    if (r.update_state) rj["update_state"] = true;
    reqs.push_back(rj);
  }
  j["requests"] = reqs;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

StateVector prepare_initial_state(const ScenarioConfig& config) {
  return initial_state(config, build_system(config));
}

ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioConfig c = config;
  if (options.seed) c.seed = *options.seed;
  if (options.crosscheck) c.crosscheck = *options.crosscheck;
  if (options.tolerance) c.tolerance = *options.tolerance;

  const System sys = build_system(c);
  // Specs were checked at parse time; re-check in case the config was built in code.
  for (const auto& r : c.requests) {
    if (r.kind == RequestKind::Wilson) (void)parse_loop_spec(sys.lattice, r.spec);
    if (r.kind == RequestKind::Meson) sys.lattice.validate_simple_path(parse_path_spec(sys.lattice, r.spec));
  }

  ScenarioReport report;
  report.config = c;
  StateVector state = initial_state(c, sys);

  bool sequential = !options.parallel;
  for (const auto& r : c.requests) sequential = sequential || r.update_state;

  if (sequential) {
    for (const auto& r : c.requests) {
      std::optional<StateVector> updated;
      report.records.push_back(run_request(r, c, sys, state, &updated));
      if (updated) state = std::move(*updated);
    }
  } else {
    std::vector<std::future<RequestRecord>> futures;
    for (const auto& r : c.requests) {
      futures.push_back(std::async(std::launch::async, [&, r] {
        return run_request(r, c, sys, state, nullptr);
      }));
    }
    for (auto& f : futures) report.records.push_back(f.get());
  }
  return report;
}

std::string report_json(const ScenarioReport& report) {
  ordered_json j;
  j["tool"] = "lgtsim";
  j["config"] = config_json(report.config);
  ordered_json results = ordered_json::array();
  for (const auto& r : report.records) {
    ordered_json rj;
    rj["id"] = r.id;
    rj["kind"] = r.kind;
    rj["spec"] = r.spec;
    rj["mode"] = r.mode;
    rj["which"] = r.which;
    rj["value"] = complex_json(r.value);
    rj["oracle"] = r.oracle ? complex_json(*r.oracle) : ordered_json(nullptr);
    rj["abs_diff"] = r.oracle ? ordered_json(r.abs_diff) : ordered_json(nullptr);
    rj["norm"] = r.norm;
    rj["ancilla_overlap"] = r.ancilla_overlap ? ordered_json(*r.ancilla_overlap) : ordered_json(nullptr);
    rj["gate_count"] = r.gate_count;
    rj["wall_seconds"] = r.wall_seconds;
    rj["passed"] = r.passed;
    results.push_back(rj);
  }
  j["results"] = results;
  j["all_passed"] = report.all_passed();
  return j.dump(2) + "\n";
}

std::string report_csv(const ScenarioReport& report) {
  std::string out =
      "id,kind,spec,mode,which,value_re,value_im,oracle_re,oracle_im,abs_diff,norm,"
      "ancilla_overlap,gate_count,wall_seconds,passed\n";
  for (const auto& r : report.records) {
    out += csv_field(r.id) + "," + r.kind + "," + csv_field(r.spec) + "," + r.mode + "," +
           csv_field(r.which) + "," + number(r.value.real()) + "," + number(r.value.imag()) + ",";
    out += r.oracle ? number(r.oracle->real()) + "," + number(r.oracle->imag()) + "," : ",,";
    out += r.oracle ? number(r.abs_diff) : "";
    out += "," + number(r.norm) + ",";
    out += r.ancilla_overlap ? number(*r.ancilla_overlap) : "";
    out += "," + std::to_string(r.gate_count) + "," + number(r.wall_seconds) + "," +
           (r.passed ? "true" : "false") + "\n";
  }
  return out;
}

GateSchedule export_schedule(const ScenarioConfig& config, const std::string& request_id) {
  const FiniteGroup group = FiniteGroup::from_label(config.group);
  const Lattice lattice(config.lx, config.ly, config.boundary);
  for (const auto& r : config.requests) {
    if (r.id != request_id) continue;
    switch (r.kind) {
      case RequestKind::Wilson:
        return compile_wilson(group, lattice, parse_loop_spec(lattice, r.spec), r.mode);
      case RequestKind::Meson:
        return compile_meson(group, lattice, parse_path_spec(lattice, r.spec), r.which, r.mode);
      case RequestKind::Hamiltonian:
        throw std::invalid_argument("request '" + request_id +
                                    "' is a hamiltonian; it runs one schedule per term and has no "
                                    "single schedule to export");
    }
  }
  throw std::invalid_argument("unknown request id '" + request_id + "'");
}

Execution run_schedule(const ScenarioConfig& config, const GateSchedule& schedule) {
  const System sys = build_system(config);
  const StateVector physical = initial_state(config, sys);
  std::size_t ancillas = 0;
  for (const auto& s : schedule.steps) {
    if (const auto* e = std::get_if<EntangleW>(&s)) ancillas = std::max(ancillas, e->ancilla + 1);
    if (const auto* p = std::get_if<PrepareAncilla>(&s); p && p->kind == AncillaKind::Qudit) {
      ancillas = std::max(ancillas, p->ancilla + 1);
    }
  }
  StateVector full = embed(physical, build_layout(sys.group, sys.lattice, true, ancillas));
  return execute(schedule, full);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------------------
// Self test
// ---------------------------------------------------------------------------

std::vector<SelfTestResult> run_selftest() {
  std::vector<SelfTestResult> out;
  auto check = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
      auto [ok, detail] = fn();
      out.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  auto bound = [](double value, double limit) {
    return std::pair{value < limit, "residual " + number(value) + " (limit " + number(limit) + ")"};
  };

  for (const char* label : {"Z2", "Z3", "S3"}) {
    check(std::string("group axioms ") + label, [&] {
      const auto report = FiniteGroup::from_label(label).verify();
      return std::pair{report.ok(1e-12), std::string(report.ok(1e-12) ? "ok" : "violated")};
    });
  }

  check("anticommutation on 4 modes", [&] {
    const auto layout = build_layout(FiniteGroup::cyclic(2), Lattice(2, 2), false);
    std::vector<Matrix> a;
    for (std::size_t j = 0; j < layout->num_matter_modes(); ++j) a.push_back(dense::annihilation(*layout, j));
    const auto n = static_cast<Eigen::Index>(layout->dim());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < a.size(); ++j) {
        const Matrix ad = a[j].adjoint();
        Matrix expect = Matrix::Zero(n, n);
        if (i == j) expect = Matrix::Identity(n, n);
        worst = std::max(worst, (a[i] * ad + ad * a[i] - expect).cwiseAbs().maxCoeff());
        worst = std::max(worst, (a[i] * a[j] + a[j] * a[i]).cwiseAbs().maxCoeff());
      }
    }
    return std::pair{worst == 0.0, "largest deviation " + number(worst)};
  });

  for (const char* label : {"Z2", "Z3"}) {
    check(std::string("stator residual ") + label + " plaquette", [&] {
      const FiniteGroup g = FiniteGroup::from_label(label);
      const Lattice lat(2, 2);
      const auto state = random_state(build_layout(g, lat, false), 3);
      return bound(stator_residual(state, rectangle_loop(lat, {0, 0}, 1, 1)), 1e-12);
    });
    check(std::string("wilson protocol vs direct ") + label, [&] {
      const FiniteGroup g = FiniteGroup::from_label(label);
      const Lattice lat(2, 2);
      const auto state = gauge_project(random_state(build_layout(g, lat, false), 5));
      return bound(run_wilson(state, rectangle_loop(lat, {0, 0}, 1, 1), true).abs_diff, 1e-10);
    });
  }

  check("meson protocol vs direct S3", [&] {
    const Lattice lat(2, 1);
    const auto state = random_state(build_layout(FiniteGroup::symmetric3(), lat, false), 9);
    const Path path = shortest_path(lat, {0, 0}, {1, 0});
    double worst = 0.0;
    for (auto op : {MesonOperator::M, MesonOperator::MPrime, MesonOperator::String}) {
      worst = std::max(worst, run_meson(state, path, op, true).abs_diff);
    }
    return bound(worst, 1e-10);
  });

  check("staggered vacuum obeys Gauss law Z3", [&] {
    const Lattice lat(2, 2);
    const auto layout = build_layout(FiniteGroup::cyclic(3), lat, false);
    return bound(gauss_residual(prepare_state(layout, ProductStateSpec::staggered_vacuum(lat, 1))), 1e-12);
  });

  return out;
}

}  // namespace lgt
