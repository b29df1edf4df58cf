#include "pqa/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pqa {

namespace {

double finite_number(const json& node, const std::string& path) {
  if (!node.is_number()) {
    throw SchemaError(path + ": expected a number");
  }
  const double value = node.get<double>();
  if (!std::isfinite(value)) {
    throw SchemaError(path + ": non-finite number");
  }
  return value;
}

int integer_field(const json& node, const std::string& path) {
  if (!node.is_number_integer()) {
    throw SchemaError(path + ": expected an integer");
  }
  return node.get<int>();
}

std::vector<double> field_vector(const json& doc, const std::string& key,
                                 int n) {
  if (!doc.contains(key)) return {};
  const json& node = doc.at(key);
  if (!node.is_array()) throw SchemaError(key + ": expected an array");
  if (static_cast<int>(node.size()) != n) {
    throw SchemaError(key + ": expected " + std::to_string(n) + " entries");
  }
  std::vector<double> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(
        finite_number(node[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Parity parity_from_string(const std::string& text, const std::string& path) {
  if (text == "even") return Parity::even;
  if (text == "odd") return Parity::odd;
  throw SchemaError(path + ": expected \"even\" or \"odd\"");
}

const char* parity_name(Parity parity) {
  return parity == Parity::even ? "even" : "odd";
}

const char* kind_name(QubitKind kind) {
  switch (kind) {
    case QubitKind::logical_pair: return "logical_pair";
    case QubitKind::split_ancilla: return "split_ancilla";
    case QubitKind::gadget_ancilla: return "gadget_ancilla";
  }
  return "logical_pair";
}

QubitKind kind_from_string(const std::string& text, const std::string& path) {
  if (text == "logical_pair") return QubitKind::logical_pair;
  if (text == "split_ancilla") return QubitKind::split_ancilla;
  if (text == "gadget_ancilla") return QubitKind::gadget_ancilla;
  throw SchemaError(path + ": unknown qubit kind \"" + text + "\"");
}

json constraint_to_json(const ParityConstraint& c) {
  return json{{"members", c.members},
              {"strength", c.strength},
              {"parity", parity_name(c.parity)}};
}

ParityConstraint constraint_from_json(const json& node,
                                      const std::string& path) {
  ParityConstraint c;
  c.members = node.at("members").get<std::vector<int>>();
  c.strength = finite_number(node.at("strength"), path + ".strength");
  c.parity = parity_from_string(node.at("parity").get<std::string>(),
                                path + ".parity");
  return c;
}

json tree_node_to_json(const ConstraintTree& tree, int index) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
  json out{{"constraint", constraint_to_json(node.constraint)}};
  if (!node.is_leaf()) {
    out["cut"] = node.cut;
    out["ancilla"] = node.ancilla_id;
    out["left"] = tree_node_to_json(tree, node.left);
    out["right"] = tree_node_to_json(tree, node.right);
  }
  return out;
}

int tree_node_from_json(const json& node, ConstraintTree& tree,
                        const std::string& path) {
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.push_back(TreeNode{constraint_from_json(node.at("constraint"),
                                                     path + ".constraint")});
  if (node.contains("cut")) {
    tree.nodes[static_cast<std::size_t>(index)].cut =
        integer_field(node.at("cut"), path + ".cut");
    tree.nodes[static_cast<std::size_t>(index)].ancilla_id =
        integer_field(node.at("ancilla"), path + ".ancilla");
    const int left = tree_node_from_json(node.at("left"), tree,
                                         path + ".left");
    tree.nodes[static_cast<std::size_t>(index)].left = left;
    const int right = tree_node_from_json(node.at("right"), tree,
                                          path + ".right");
    tree.nodes[static_cast<std::size_t>(index)].right = right;
  }
  return index;
}

json pair_terms_to_json(const std::vector<PairTerm>& terms) {
  json out = json::array();
  for (const auto& term : terms) {
    out.push_back(json::array({term.a, term.b, term.weight}));
  }
  return out;
}

json field_terms_to_json(const std::vector<FieldTerm>& terms) {
  json out = json::array();
  for (const auto& term : terms) {
    out.push_back(json::array({term.site, term.weight}));
  }
  return out;
}

std::vector<PairTerm> pair_terms_from_json(const json& node,
                                           const std::string& path) {
  std::vector<PairTerm> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& entry = node[i];
    const std::string entry_path = path + "[" + std::to_string(i) + "]";
    if (!entry.is_array() || entry.size() != 3) {
      throw SchemaError(entry_path + ": expected [a, b, weight]");
    }
    out.push_back({integer_field(entry[0], entry_path),
                   integer_field(entry[1], entry_path),
                   finite_number(entry[2], entry_path)});
  }
  return out;
}

std::vector<FieldTerm> field_terms_from_json(const json& node,
                                             const std::string& path) {
  std::vector<FieldTerm> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& entry = node[i];
    const std::string entry_path = path + "[" + std::to_string(i) + "]";
    if (!entry.is_array() || entry.size() != 2) {
      throw SchemaError(entry_path + ": expected [site, weight]");
    }
    out.push_back({integer_field(entry[0], entry_path),
                   finite_number(entry[1], entry_path)});
  }
  return out;
}

}  // namespace

SpinGlassProblem problem_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("problem document must be an object");
  if (!doc.contains("n")) throw SchemaError("n: required field");
  SpinGlassProblem problem;
  problem.n_logical = integer_field(doc.at("n"), "n");
  if (problem.n_logical < 1) throw SchemaError("n: must be positive");

  if (doc.contains("couplings")) {
    const json& couplings = doc.at("couplings");
    if (!couplings.is_array()) throw SchemaError("couplings: expected array");
    for (std::size_t k = 0; k < couplings.size(); ++k) {
      const std::string path = "couplings[" + std::to_string(k) + "]";
      const json& entry = couplings[k];
      if (!entry.is_array() || entry.size() != 3) {
        throw SchemaError(path + ": expected [i, j, J]");
      }
      int i = integer_field(entry[0], path + "[0]");
      int j = integer_field(entry[1], path + "[1]");
      const double value = finite_number(entry[2], path + "[2]");
      if (i == j) throw SchemaError(path + ": self-coupling");
      if (i > j) std::swap(i, j);
      if (i < 1 || j > problem.n_logical) {
        throw SchemaError(path + ": index out of range 1.." +
                          std::to_string(problem.n_logical));
      }
      if (!problem.couplings.emplace(std::pair{i, j}, value).second) {
        throw SchemaError(path + ": duplicate pair (" + std::to_string(i) +
                          ", " + std::to_string(j) + ")");
      }
    }
  }
  problem.z_fields = field_vector(doc, "z_fields", problem.n_logical);
  problem.x_fields = field_vector(doc, "x_fields", problem.n_logical);
  return problem;
}

json problem_to_json(const SpinGlassProblem& problem) {
  json couplings = json::array();
  for (const auto& [pair, value] : problem.couplings) {
    couplings.push_back(json::array({pair.first, pair.second, value}));
  }
  std::vector<double> z = problem.z_fields, x = problem.x_fields;
  z.resize(static_cast<std::size_t>(problem.n_logical), 0.0);
  x.resize(static_cast<std::size_t>(problem.n_logical), 0.0);
  return json{{"n", problem.n_logical},
              {"couplings", couplings},
              {"z_fields", z},
              {"x_fields", x}};
}

SpinGlassProblem load_problem(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("problem document: invalid JSON");
  return problem_from_json(doc);
}

std::string serialize_problem(const SpinGlassProblem& problem) {
  return problem_to_json(problem).dump(2) + "\n";
}

json compiled_to_json(const CompiledProgram& program) {
  json qubits = json::array();
  for (const auto& q : program.layout.qubits) {
    json entry{{"id", q.id},
               {"kind", kind_name(q.kind)},
               {"position", json::array({q.row, q.col})}};
    entry["pair"] = q.pair ? json::array({q.pair->first, q.pair->second})
                           : json(nullptr);
    qubits.push_back(std::move(entry));
  }
  json plaquettes = json::array();
  for (const auto& c : program.layout.plaquettes) {
    plaquettes.push_back(constraint_to_json(c));
  }
  json trees = json::array();
  for (const auto& tree : program.trees) {
    trees.push_back(tree_node_to_json(tree, 0));
  }
  json decode_map = json::array();
  for (const auto& [id, pair] : program.decode_map) {
    decode_map.push_back(json::array({id, pair.first, pair.second}));
  }
  const TwoBodyModel& m = program.model;
  json model{{"n_spins", m.n_spins},
             {"pair_terms", pair_terms_to_json(m.pair_terms)},
             {"constraint_fields", field_terms_to_json(m.constraint_fields)},
             {"z_fields", field_terms_to_json(m.z_fields)},
             {"x_fields", field_terms_to_json(m.x_fields)},
             {"ancilla_ids", m.ancilla_ids},
             {"crossing_free", m.crossing_free}};
  return json{{"format", "pqa-compiled"},
              {"version", 1},
              {"problem", problem_to_json(program.problem)},
              {"n_logical", program.layout.n_logical},
              {"qubits", qubits},
              {"plaquettes", plaquettes},
              {"trees", trees},
              {"model", model},
              {"decode_map", decode_map}};
}

CompiledProgram compiled_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "pqa-compiled") {
    throw SchemaError("not a compiled-program document");
  }
  CompiledProgram program;
  program.problem = problem_from_json(doc.at("problem"));
  program.layout.n_logical = integer_field(doc.at("n_logical"), "n_logical");
  for (std::size_t i = 0; i < doc.at("qubits").size(); ++i) {
    const json& node = doc.at("qubits")[i];
    const std::string path = "qubits[" + std::to_string(i) + "]";
    ParityQubit q;
    q.id = integer_field(node.at("id"), path + ".id");
    q.kind = kind_from_string(node.at("kind").get<std::string>(),
                              path + ".kind");
    if (!node.at("pair").is_null()) {
      q.pair = {integer_field(node.at("pair")[0], path + ".pair"),
                integer_field(node.at("pair")[1], path + ".pair")};
    }
    q.row = integer_field(node.at("position")[0], path + ".position");
    q.col = integer_field(node.at("position")[1], path + ".position");
    program.layout.qubits.push_back(std::move(q));
  }
  for (std::size_t i = 0; i < doc.at("plaquettes").size(); ++i) {
    program.layout.plaquettes.push_back(constraint_from_json(
        doc.at("plaquettes")[i], "plaquettes[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < doc.at("trees").size(); ++i) {
    ConstraintTree tree;
    tree_node_from_json(doc.at("trees")[i], tree,
                        "trees[" + std::to_string(i) + "]");
    program.trees.push_back(std::move(tree));
  }
  const json& model = doc.at("model");
  program.model.n_spins = integer_field(model.at("n_spins"),
                                        "model.n_spins");
  program.model.pair_terms =
      pair_terms_from_json(model.at("pair_terms"), "model.pair_terms");
  program.model.constraint_fields = field_terms_from_json(
      model.at("constraint_fields"), "model.constraint_fields");
  program.model.z_fields =
      field_terms_from_json(model.at("z_fields"), "model.z_fields");
  program.model.x_fields =
      field_terms_from_json(model.at("x_fields"), "model.x_fields");
  program.model.ancilla_ids =
      model.at("ancilla_ids").get<std::vector<int>>();
  program.model.crossing_free = model.at("crossing_free").get<bool>();
  for (const auto& entry : doc.at("decode_map")) {
    program.decode_map[entry[0].get<int>()] = {entry[1].get<int>(),
                                               entry[2].get<int>()};
  }
  return program;
}

std::string serialize_compiled(const CompiledProgram& program) {
  return compiled_to_json(program).dump(2) + "\n";
}

CompiledProgram load_compiled(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("compiled document: invalid JSON");
  return compiled_from_json(doc);
}

json report_to_json(const GroundManifoldReport& report) {
  return json{{"min_energy", report.min_energy},
              {"gap", report.gap},
              {"ground_states", report.ground_states},
              {"marginal_ground", report.marginal_ground}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write file: " + path);
  out << content;
}

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(12) << value;
  return out.str();
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_trace_csv(const std::string& path, const SpectrumTrace& trace) {
  std::vector<std::string> header{"t"};
  for (Eigen::Index m = 0; m < trace.levels.cols(); ++m) {
    header.push_back("level_" + std::to_string(m));
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    std::vector<double> row{trace.times[k]};
    for (Eigen::Index m = 0; m < trace.levels.cols(); ++m) {
      row.push_back(trace.levels(static_cast<Eigen::Index>(k), m));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
  std::vector<std::vector<double>> rows;
  for (const auto& sample : result.success_trace) {
    rows.push_back({sample[0], sample[1]});
  }
  write_csv(path, {"t", "success_prob"}, rows);
}

void write_comparison_csv(const std::string& path,
                          const ProtocolComparison& comparison) {
  std::vector<std::string> header{"t"};
  for (Eigen::Index m = 0; m < comparison.ramp.levels.cols(); ++m) {
    header.push_back("ramp_level_" + std::to_string(m));
  }
  for (Eigen::Index m = 0; m < comparison.always_on.levels.cols(); ++m) {
    header.push_back("always_on_level_" + std::to_string(m));
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < comparison.ramp.times.size(); ++k) {
    std::vector<double> row{comparison.ramp.times[k]};
    for (Eigen::Index m = 0; m < comparison.ramp.levels.cols(); ++m) {
      row.push_back(comparison.ramp.levels(static_cast<Eigen::Index>(k), m));
    }
    for (Eigen::Index m = 0; m < comparison.always_on.levels.cols(); ++m) {
      row.push_back(
          comparison.always_on.levels(static_cast<Eigen::Index>(k), m));
    }
    rows.push_back(std::move(row));
  }
  write_csv(path, header, rows);
}

}  // namespace pqa
