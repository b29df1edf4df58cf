#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pqa/annealer.hpp"
#include "pqa/compiler.hpp"
#include "pqa/model.hpp"
#include "pqa/oracle.hpp"

// Serialization: problems and compiled programs as JSON documents with a
// canonical form (sorted keys, lexicographically sorted couplings, terms
// ordered by id) so identical inputs produce byte-identical files. Numeric
// traces go to plot-ready CSV.

namespace pqa {

using json = nlohmann::json;

// Problem documents: {"n": N, "couplings": [[i, j, J], ...],
// "z_fields": [...], "x_fields": [...]}; field arrays optional.
SpinGlassProblem problem_from_json(const json& doc);
json problem_to_json(const SpinGlassProblem& problem);

SpinGlassProblem load_problem(const std::string& text);
std::string serialize_problem(const SpinGlassProblem& problem);

json compiled_to_json(const CompiledProgram& program);
CompiledProgram compiled_from_json(const json& doc);

std::string serialize_compiled(const CompiledProgram& program);
CompiledProgram load_compiled(const std::string& text);

json report_to_json(const GroundManifoldReport& report);

// File helpers. read_text throws SchemaError when the file cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// CSV with a fixed 12-significant-digit format (deterministic bytes).
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double value);

void write_trace_csv(const std::string& path, const SpectrumTrace& trace);
void write_sweep_csv(const std::string& path, const SweepResult& result);
void write_comparison_csv(const std::string& path,
                          const ProtocolComparison& comparison);

}  // namespace pqa
