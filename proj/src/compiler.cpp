#include "pqa/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

namespace pqa {

namespace {

// Lattice pitch of the planar embedding. Logical qubit (i, j) sits at
// (kScale * (j - i), kScale * (i + j)); plaquette centers and gadget
// ancillas then land on integer coordinates strictly inside their cells.
constexpr int kScale = 4;

struct Point {
  std::int64_t row = 0, col = 0;
};

Point position_of(const ParityQubit& q) { return {q.row, q.col}; }

std::int64_t cross(Point o, Point a, Point b) {
  return (a.row - o.row) * (b.col - o.col) -
         (a.col - o.col) * (b.row - o.row);
}

bool strictly_inside(Point p, Point a, Point b, Point c) {
  std::int64_t d1 = cross(a, b, p);
  std::int64_t d2 = cross(b, c, p);
  std::int64_t d3 = cross(c, a, p);
  if (d1 == 0 || d2 == 0 || d3 == 0) return false;
  return (d1 > 0) == (d2 > 0) && (d2 > 0) == (d3 > 0);
}

Point interior_point(Point a, Point b, Point c) {
  Point p{static_cast<std::int64_t>(
              std::llround((a.row + b.row + c.row) / 3.0)),
          static_cast<std::int64_t>(
              std::llround((a.col + b.col + c.col) / 3.0))};
  if (!strictly_inside(p, a, b, c)) {
    throw std::logic_error("gadget ancilla placement fell outside its cell");
  }
  return p;
}

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.row, b.row) <= p.row && p.row <= std::max(a.row, b.row) &&
         std::min(a.col, b.col) <= p.col && p.col <= std::max(a.col, b.col);
}

// Segments from distinct qubit pairs may not intersect anywhere, including
// endpoint touches and collinear overlap; segments sharing a qubit are
// exempt (they meet at that qubit only, by position uniqueness).
bool segments_conflict(Point p1, Point p2, Point p3, Point p4) {
  std::int64_t d1 = cross(p3, p4, p1);
  std::int64_t d2 = cross(p3, p4, p2);
  std::int64_t d3 = cross(p1, p2, p3);
  std::int64_t d4 = cross(p1, p2, p4);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(p3, p4, p1)) return true;
  if (d2 == 0 && on_segment(p3, p4, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, p3)) return true;
  if (d4 == 0 && on_segment(p1, p2, p4)) return true;
  return false;
}

void validate_problem(const SpinGlassProblem& problem) {
  if (problem.n_logical < 1) {
    throw SchemaError("n: expected a positive number of logical spins");
  }
  for (const auto& [pair, j] : problem.couplings) {
    auto [i, k] = pair;
    if (i >= k) throw SchemaError("couplings: pairs must satisfy i < j");
    if (i < 1 || k > problem.n_logical) {
      std::ostringstream msg;
      msg << "couplings: pair (" << i << ", " << k << ") out of range 1.."
          << problem.n_logical;
      throw SchemaError(msg.str());
    }
    if (!std::isfinite(j)) throw SchemaError("couplings: non-finite strength");
  }
  for (auto* fields : {&problem.z_fields, &problem.x_fields}) {
    if (!fields->empty() &&
        static_cast<int>(fields->size()) != problem.n_logical) {
      throw SchemaError("field vector length does not match n");
    }
  }
}

int cut_for(SplitPolicy policy, int order) {
  switch (policy) {
    case SplitPolicy::balanced:
      return order / 2;
    case SplitPolicy::left_pair:
    case SplitPolicy::paper_example:
      return 2;
  }
  return order / 2;
}

}  // namespace

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

int ParityLayout::qubit_id(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& q : qubits) {
    if (q.kind == QubitKind::logical_pair && q.pair &&
        q.pair->first == i && q.pair->second == j) {
      return q.id;
    }
  }
  throw SchemaError("no parity qubit for logical pair (" + std::to_string(i) +
                    ", " + std::to_string(j) + ")");
}

ParityLayout parity_encode(const SpinGlassProblem& problem) {
  validate_problem(problem);
  const int n = problem.n_logical;
  if (n < 3) {
    throw SchemaError(
        "no constraints exist: parity encoding needs at least 3 logical "
        "spins");
  }

  ParityLayout layout;
  layout.n_logical = n;

  // K = N(N-1)/2 logical-pair qubits, ids in lexicographic (i, j) order,
  // placed on the pyramid grid: row grows with the pair distance j - i.
  std::map<std::pair<int, int>, int> id_of;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      ParityQubit q;
      q.id = static_cast<int>(layout.qubits.size());
      q.kind = QubitKind::logical_pair;
      q.pair = {i, j};
      q.row = kScale * (j - i);
      q.col = kScale * (i + j);
      id_of[{i, j}] = q.id;
      layout.qubits.push_back(q);
    }
  }

  // Plaquettes: 3-body triangles along the bottom boundary, then 4-body
  // cells (stored in n, e, s, w order) tiling the bulk. Every constraint is
  // an even-parity check: consistent pair states multiply to +1 around any
  // closed cycle of logical indices.
  for (int i = 1; i <= n - 2; ++i) {
    ParityConstraint c;
    c.members = {id_of[{i, i + 1}], id_of[{i, i + 2}], id_of[{i + 1, i + 2}]};
    c.strength = 1.0;
    c.parity = Parity::even;
    layout.plaquettes.push_back(std::move(c));
  }
  for (int d = 2; d <= n - 2; ++d) {
    for (int i = 1; i + d + 1 <= n; ++i) {
      const int j = i + d;
      ParityConstraint c;
      c.members = {id_of[{i, j + 1}], id_of[{i + 1, j + 1}],
                   id_of[{i + 1, j}], id_of[{i, j}]};  // n, e, s, w
      c.strength = 1.0;
      c.parity = Parity::even;
      layout.plaquettes.push_back(std::move(c));
    }
  }
  return layout;
}

// ---------------------------------------------------------------------------
// Decomposition
// ---------------------------------------------------------------------------

std::pair<ParityConstraint, ParityConstraint> split_constraint(
    const ParityConstraint& c, int cut, int ancilla_id) {
  const int order = c.order();
  if (cut < 1 || cut > order - 1) {
    std::ostringstream msg;
    msg << "degenerate cut " << cut << " for an order-" << order
        << " constraint";
    throw SchemaError(msg.str());
  }
  if (std::find(c.members.begin(), c.members.end(), ancilla_id) !=
      c.members.end()) {
    throw SchemaError("ancilla id " + std::to_string(ancilla_id) +
                      " is not fresh");
  }

  ParityConstraint left, right;
  left.members.assign(c.members.begin(), c.members.begin() + cut);
  left.members.push_back(ancilla_id);
  right.members.push_back(ancilla_id);
  right.members.insert(right.members.end(), c.members.begin() + cut,
                       c.members.end());
  left.strength = right.strength = c.strength;

  // The ancilla communicates the subset parity. Even root: both subsets
  // together with the ancilla must be odd; odd root: the sign flips on the
  // second product, so one child is odd and the other even. Either way the
  // children's joint ground manifold marginalizes to the root's and the gap
  // stays 2 * strength.
  if (c.parity == Parity::even) {
    left.parity = Parity::odd;
    right.parity = Parity::odd;
  } else {
    left.parity = Parity::odd;
    right.parity = Parity::even;
  }
  return {std::move(left), std::move(right)};
}

std::vector<ParityConstraint> ConstraintTree::leaves() const {
  std::vector<ParityConstraint> out;
  // preorder walk; nodes were appended in preorder so child indices are
  // always forward references
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    int idx = stack.back();
    stack.pop_back();
    const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
    if (node.is_leaf()) {
      out.push_back(node.constraint);
    } else {
      stack.push_back(node.right);
      stack.push_back(node.left);
    }
  }
  return out;
}

std::vector<int> ConstraintTree::ancilla_ids() const {
  std::vector<int> out;
  for (const auto& node : nodes) {
    if (!node.is_leaf()) out.push_back(node.ancilla_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int build_tree(ConstraintTree& tree, const ParityConstraint& c,
               SplitPolicy policy, int& next_ancilla) {
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{c});
  if (c.order() > 3) {
    const int cut = cut_for(policy, c.order());
    const int ancilla = next_ancilla++;
    auto [left, right] = split_constraint(c, cut, ancilla);
    tree.nodes[static_cast<std::size_t>(index)].cut = cut;
    tree.nodes[static_cast<std::size_t>(index)].ancilla_id = ancilla;
    const int left_index = build_tree(tree, left, policy, next_ancilla);
    tree.nodes[static_cast<std::size_t>(index)].left = left_index;
    const int right_index = build_tree(tree, right, policy, next_ancilla);
    tree.nodes[static_cast<std::size_t>(index)].right = right_index;
  }
  return index;
}

}  // namespace

ConstraintTree decompose_to_tree(const ParityConstraint& c, SplitPolicy policy,
                                 int first_ancilla_id) {
  if (c.order() < 3) {
    throw SchemaError("cannot decompose a constraint of order " +
                      std::to_string(c.order()));
  }
  int next = first_ancilla_id;
  if (next < 0) {
    next = *std::max_element(c.members.begin(), c.members.end()) + 1;
  }
  ConstraintTree tree;
  build_tree(tree, c, policy, next);
  return tree;
}

TwoBodyModel gadgetize_3body(const ParityConstraint& c, int ancilla_id) {
  if (c.order() != 3) {
    throw SchemaError("gadget construction requires an order-3 constraint, "
                      "got order " +
                      std::to_string(c.order()));
  }
  if (std::find(c.members.begin(), c.members.end(), ancilla_id) !=
      c.members.end()) {
    throw SchemaError("gadget ancilla id must be fresh");
  }
  const double w = c.strength;
  const double field_sign = c.parity == Parity::even ? -1.0 : 1.0;
  const int m1 = c.members[0], m2 = c.members[1], m3 = c.members[2];

  TwoBodyModel fragment;
  fragment.n_spins = std::max({m1, m2, m3, ancilla_id}) + 1;
  fragment.pair_terms = {
      {m1, m2, w},          {m2, m3, w},          {m3, m1, w},
      {m1, ancilla_id, 2 * w}, {m2, ancilla_id, 2 * w}, {m3, ancilla_id, 2 * w},
  };
  fragment.constraint_fields = {
      {m1, field_sign * w},
      {m2, field_sign * w},
      {m3, field_sign * w},
      {ancilla_id, field_sign * 2 * w},
  };
  fragment.ancilla_ids = {ancilla_id};
  fragment.crossing_free = true;
  return fragment;
}

// ---------------------------------------------------------------------------
// Full compile
// ---------------------------------------------------------------------------

CompiledProgram compile_full(const SpinGlassProblem& problem,
                             const CompileOptions& options) {
  validate_problem(problem);
  for (double h : problem.z_fields) {
    if (h != 0.0) {
      throw SchemaError(
          "z_fields: logical on-site fields have no parity image; fold them "
          "into couplings against a fixed reference spin");
    }
  }
  for (double h : problem.x_fields) {
    if (h != 0.0) {
      throw SchemaError(
          "x_fields: per-spin transverse fields are not programmable in the "
          "parity layout; the driver is uniform");
    }
  }

  CompiledProgram program;
  program.problem = problem;
  program.layout = parity_encode(problem);
  ParityLayout& layout = program.layout;
  const int k_logical = static_cast<int>(layout.qubits.size());

  double strength = options.constraint_strength;
  if (strength <= 0.0) {
    double j_total = 0.0;
    for (const auto& [pair, j] : problem.couplings) j_total += std::abs(j);
    strength = 4.0 * j_total + 1.0;
  }

  std::map<std::pair<int, int>, double> pair_accum;
  std::map<int, double> field_accum;
  auto add_fragment = [&](const TwoBodyModel& fragment) {
    for (const auto& term : fragment.pair_terms) {
      pair_accum[std::minmax(term.a, term.b)] += term.weight;
    }
    for (const auto& term : fragment.constraint_fields) {
      field_accum[term.site] += term.weight;
    }
  };

  auto qubit_point = [&](int id) {
    return position_of(layout.qubits[static_cast<std::size_t>(id)]);
  };
  auto add_ancilla = [&](int id, QubitKind kind, Point p) {
    ParityQubit q;
    q.id = id;
    q.kind = kind;
    q.row = static_cast<int>(p.row);
    q.col = static_cast<int>(p.col);
    layout.qubits.push_back(q);
  };

  int next_id = k_logical;
  for (auto& plaquette : layout.plaquettes) {
    plaquette.strength = strength;

    if (plaquette.order() == 4) {
      // n, e, s, w as laid out by parity_encode; regroup on request.
      std::vector<int> members = plaquette.members;
      if (options.grouping == PlaquetteGrouping::nw_es) {
        members = {members[0], members[3], members[1], members[2]};
      }
      ParityConstraint ordered{members, strength, plaquette.parity};

      const int split_id = next_id++;
      ConstraintTree tree =
          decompose_to_tree(ordered, options.policy, split_id);
      Point center{(qubit_point(members[0]).row + qubit_point(members[1]).row +
                    qubit_point(members[2]).row + qubit_point(members[3]).row) /
                       4,
                   (qubit_point(members[0]).col + qubit_point(members[1]).col +
                    qubit_point(members[2]).col + qubit_point(members[3]).col) /
                       4};
      add_ancilla(split_id, QubitKind::split_ancilla, center);

      for (const ParityConstraint& leaf : tree.leaves()) {
        const int gadget_id = next_id++;
        add_fragment(gadgetize_3body(leaf, gadget_id));
        add_ancilla(gadget_id, QubitKind::gadget_ancilla,
                    interior_point(qubit_point(leaf.members[0]),
                                   qubit_point(leaf.members[1]),
                                   qubit_point(leaf.members[2])));
      }
      program.trees.push_back(std::move(tree));
    } else {
      // Boundary triangles skip the split and take a single gadget ancilla.
      ConstraintTree tree;
      tree.nodes.push_back(TreeNode{plaquette});
      const int gadget_id = next_id++;
      add_fragment(gadgetize_3body(plaquette, gadget_id));
      add_ancilla(gadget_id, QubitKind::gadget_ancilla,
                  interior_point(qubit_point(plaquette.members[0]),
                                 qubit_point(plaquette.members[1]),
                                 qubit_point(plaquette.members[2])));
      program.trees.push_back(std::move(tree));
    }
  }

  TwoBodyModel& model = program.model;
  model.n_spins = next_id;
  for (const auto& [key, weight] : pair_accum) {
    model.pair_terms.push_back({key.first, key.second, weight});
  }
  for (const auto& [site, weight] : field_accum) {
    model.constraint_fields.push_back({site, weight});
  }
  for (const auto& [pair, j] : problem.couplings) {
    model.z_fields.push_back({layout.qubit_id(pair.first, pair.second), j});
  }
  std::sort(model.z_fields.begin(), model.z_fields.end(),
            [](const FieldTerm& a, const FieldTerm& b) {
              return a.site < b.site;
            });
  const int driver_count = options.driver_scope == DriverScope::all_spins
                               ? model.n_spins
                               : k_logical;
  for (int i = 0; i < driver_count; ++i) model.x_fields.push_back({i, 1.0});
  for (int i = k_logical; i < model.n_spins; ++i) {
    model.ancilla_ids.push_back(i);
  }

  // Planarity: no two coupler segments may cross in the embedding.
  model.crossing_free = true;
  const auto& pairs = model.pair_terms;
  for (std::size_t u = 0; u < pairs.size() && model.crossing_free; ++u) {
    for (std::size_t v = u + 1; v < pairs.size(); ++v) {
      if (pairs[u].a == pairs[v].a || pairs[u].a == pairs[v].b ||
          pairs[u].b == pairs[v].a || pairs[u].b == pairs[v].b) {
        continue;
      }
      if (segments_conflict(qubit_point(pairs[u].a), qubit_point(pairs[u].b),
                            qubit_point(pairs[v].a),
                            qubit_point(pairs[v].b))) {
        model.crossing_free = false;
        break;
      }
    }
  }

  for (const auto& q : layout.qubits) {
    if (q.kind == QubitKind::logical_pair) {
      program.decode_map[q.id] = *q.pair;
    }
  }
  validate_model(model);
  return program;
}

TwoBodyModel single_plaquette_model(double strength,
                                    std::span<const double> member_fields,
                                    const CompileOptions& options) {
  if (!member_fields.empty() && member_fields.size() != 4) {
    throw SchemaError("single plaquette takes 4 member fields");
  }
  std::vector<int> members = {0, 1, 2, 3};  // n, e, s, w
  if (options.grouping == PlaquetteGrouping::nw_es) {
    members = {0, 3, 1, 2};
  }
  ParityConstraint plaquette{members, strength, Parity::even};
  ConstraintTree tree = decompose_to_tree(plaquette, options.policy, 4);

  TwoBodyModel model;
  model.n_spins = 7;
  std::map<std::pair<int, int>, double> pair_accum;
  std::map<int, double> field_accum;
  int gadget_id = 5;
  for (const ParityConstraint& leaf : tree.leaves()) {
    const TwoBodyModel fragment = gadgetize_3body(leaf, gadget_id++);
    for (const auto& term : fragment.pair_terms) {
      pair_accum[std::minmax(term.a, term.b)] += term.weight;
    }
    for (const auto& term : fragment.constraint_fields) {
      field_accum[term.site] += term.weight;
    }
  }
  for (const auto& [key, weight] : pair_accum) {
    model.pair_terms.push_back({key.first, key.second, weight});
  }
  for (const auto& [site, weight] : field_accum) {
    model.constraint_fields.push_back({site, weight});
  }
  for (std::size_t m = 0; m < member_fields.size(); ++m) {
    if (member_fields[m] != 0.0) {
      model.z_fields.push_back({static_cast<int>(m), member_fields[m]});
    }
  }
  const int driver_count =
      options.driver_scope == DriverScope::all_spins ? 7 : 4;
  for (int i = 0; i < driver_count; ++i) model.x_fields.push_back({i, 1.0});
  model.ancilla_ids = {4, 5, 6};
  model.crossing_free = true;
  validate_model(model);
  return model;
}

// ---------------------------------------------------------------------------
// Decode / encode
// ---------------------------------------------------------------------------

std::vector<int> decode(const ParityLayout& layout,
                        std::span<const int> physical) {
  if (physical.size() != layout.qubits.size()) {
    std::ostringstream msg;
    msg << "physical state has " << physical.size() << " spins, layout has "
        << layout.qubits.size();
    throw SchemaError(msg.str());
  }
  for (int s : physical) {
    if (s != 1 && s != -1) throw SchemaError("spins must be +1 or -1");
  }

  for (std::size_t p = 0; p < layout.plaquettes.size(); ++p) {
    const ParityConstraint& c = layout.plaquettes[p];
    int product = 1;
    for (int id : c.members) product *= physical[static_cast<std::size_t>(id)];
    const int expected = c.parity == Parity::even ? 1 : -1;
    if (product != expected) {
      std::ostringstream msg;
      msg << "unsatisfied plaquette " << p << " {";
      for (std::size_t m = 0; m < c.members.size(); ++m) {
        msg << (m ? ", " : "") << c.members[m];
      }
      msg << "}";
      throw VerificationError(msg.str());
    }
  }

  const int n = layout.n_logical;
  std::vector<int> logical(static_cast<std::size_t>(n), 0);
  logical[0] = 1;  // gauge: fix logical spin 1 up
  for (int j = 2; j <= n; ++j) {
    logical[static_cast<std::size_t>(j - 1)] =
        physical[static_cast<std::size_t>(layout.qubit_id(1, j))];
  }
  for (const auto& q : layout.qubits) {
    if (q.kind != QubitKind::logical_pair) continue;
    auto [i, j] = *q.pair;
    if (physical[static_cast<std::size_t>(q.id)] !=
        logical[static_cast<std::size_t>(i - 1)] *
            logical[static_cast<std::size_t>(j - 1)]) {
      throw VerificationError("not in code space: pair (" + std::to_string(i) +
                              ", " + std::to_string(j) +
                              ") is inconsistent with the propagated spins");
    }
  }
  return logical;
}

std::vector<int> encode_state(const ParityLayout& layout,
                              std::span<const int> logical) {
  if (static_cast<int>(logical.size()) != layout.n_logical) {
    throw SchemaError("logical state length does not match N");
  }
  std::vector<int> physical(layout.qubits.size(), 1);
  for (const auto& q : layout.qubits) {
    if (q.kind != QubitKind::logical_pair) {
      throw SchemaError("encode_state expects an ancilla-free layout");
    }
    auto [i, j] = *q.pair;
    physical[static_cast<std::size_t>(q.id)] =
        logical[static_cast<std::size_t>(i - 1)] *
        logical[static_cast<std::size_t>(j - 1)];
  }
  return physical;
}

}  // namespace pqa
