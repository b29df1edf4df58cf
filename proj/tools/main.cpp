// pqa: compile all-to-all Ising problems onto the planar parity lattice,
// certify the compilation against exhaustive enumeration, simulate the
// adiabatic sweep exactly, and emit Transmon/JRM hardware parameters.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "pqa/annealer.hpp"
#include "pqa/compiler.hpp"
#include "pqa/hardware.hpp"
#include "pqa/io.hpp"
#include "pqa/model.hpp"
#include "pqa/oracle.hpp"
#include "pqa/verify.hpp"

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitVerification = 4;

// uniform double in [0, 1) derived portably from the raw engine words, so
// identical seeds give identical artifacts everywhere
double uniform01(std::mt19937& rng) {
  return rng() * (1.0 / 4294967296.0);
}

pqa::SplitPolicy parse_policy(const std::string& text) {
  if (text == "balanced") return pqa::SplitPolicy::balanced;
  if (text == "left-pair") return pqa::SplitPolicy::left_pair;
  if (text == "paper-example") return pqa::SplitPolicy::paper_example;
  throw pqa::SchemaError("unknown split policy: " + text);
}

pqa::DriverScope parse_scope(const std::string& text) {
  if (text == "all") return pqa::DriverScope::all_spins;
  if (text == "logical-only") return pqa::DriverScope::logical_only;
  throw pqa::SchemaError("unknown driver scope: " + text);
}

pqa::PlaquetteGrouping parse_grouping(const std::string& text) {
  if (text == "ne-sw") return pqa::PlaquetteGrouping::ne_sw;
  if (text == "nw-es") return pqa::PlaquetteGrouping::nw_es;
  throw pqa::SchemaError("unknown grouping: " + text);
}

pqa::ScheduleMode parse_mode(const std::string& text) {
  if (text == "ramp") return pqa::ScheduleMode::ramp;
  if (text == "always-on") return pqa::ScheduleMode::always_on;
  throw pqa::SchemaError("unknown schedule: " + text);
}

struct ScheduleFlags {
  std::string mode = "ramp";
  double total_time = 10.0;
  double a_max = 1.0, b_max = 1.0, c_max = 1.0;

  pqa::ScheduleSpec spec() const {
    return {parse_mode(mode), a_max, b_max, c_max, total_time};
  }
};

void add_schedule_flags(CLI::App* cmd, ScheduleFlags& flags) {
  cmd->add_option("--schedule", flags.mode, "ramp|always-on")
      ->check(CLI::IsMember({"ramp", "always-on"}));
  cmd->add_option("--T", flags.total_time, "total sweep time");
  cmd->add_option("--a-max", flags.a_max, "driver schedule maximum");
  cmd->add_option("--b-max", flags.b_max, "problem schedule maximum");
  cmd->add_option("--c-max", flags.c_max, "constraint schedule maximum");
}

int run_compile(const std::string& input, const std::string& output,
                const std::string& policy, const std::string& scope,
                const std::string& grouping, double strength) {
  pqa::SpinGlassProblem problem =
      pqa::load_problem(pqa::read_text_file(input));
  pqa::CompileOptions options;
  options.policy = parse_policy(policy);
  options.driver_scope = parse_scope(scope);
  options.grouping = parse_grouping(grouping);
  options.constraint_strength = strength;
  pqa::CompiledProgram program = pqa::compile_full(problem, options);
  pqa::write_text_file(output, pqa::serialize_compiled(program));
  std::cout << "compiled " << program.layout.n_logical << " logical spins -> "
            << program.model.n_spins << " physical spins ("
            << program.layout.plaquettes.size() << " plaquettes, strength "
            << pqa::format_double(program.layout.plaquettes.front().strength)
            << ") -> " << output << "\n";
  return 0;
}

int run_verify(const std::string& input, const std::string& output) {
  pqa::CompiledProgram program =
      pqa::load_compiled(pqa::read_text_file(input));
  pqa::VerifyReport report = pqa::verify_compiled(program);

  pqa::json doc{{"ok", report.ok},
                {"logical_qubits", report.n_logical_qubits},
                {"gf2_rank", report.gf2_rank},
                {"expected_rank", report.expected_rank},
                {"model_check_ran", report.model_check_ran},
                {"model_check_ok", report.model_check_ok},
                {"failures", report.failures}};
  pqa::json trees = pqa::json::array();
  for (const auto& tv : report.trees) {
    trees.push_back({{"tree", tv.tree_index},
                     {"ok", tv.ok},
                     {"gap_original", tv.gap_original},
                     {"gap_decomposed", tv.gap_decomposed}});
  }
  doc["trees"] = trees;
  if (report.model_report) {
    doc["model_ground"] = pqa::report_to_json(*report.model_report);
  }
  pqa::write_text_file(output, doc.dump(2) + "\n");

  for (const auto& failure : report.failures) {
    std::cerr << "verify: " << failure << "\n";
  }
  std::cout << (report.ok ? "verify: ok" : "verify: FAILED") << " (rank "
            << report.gf2_rank << "/" << report.expected_rank << ", "
            << report.trees.size() << " trees) -> " << output << "\n";
  if (!report.ok) throw pqa::VerificationError("compiled program is invalid");
  return 0;
}

int run_spectrum(const std::string& input, const std::string& output,
                 const ScheduleFlags& flags, int levels, int steps,
                 bool compare) {
  pqa::CompiledProgram program =
      pqa::load_compiled(pqa::read_text_file(input));
  const auto system = pqa::ScheduledHamiltonian::from_model(program.model);
  if (compare) {
    auto comparison =
        pqa::compare_protocols(system, flags.spec(), levels, steps);
    pqa::write_comparison_csv(output, comparison);
  } else {
    auto trace = pqa::spectrum_trace(system, flags.spec(), levels, steps);
    pqa::write_trace_csv(output, trace);
  }
  std::cout << "spectrum trace (" << steps << " samples, " << levels
            << " levels) -> " << output << "\n";
  return 0;
}

int run_anneal(const std::string& input, const std::string& output,
               const ScheduleFlags& flags, int steps, int samples) {
  pqa::CompiledProgram program =
      pqa::load_compiled(pqa::read_text_file(input));
  const auto system = pqa::ScheduledHamiltonian::from_model(program.model);
  pqa::SweepResult result = pqa::evolve(system, flags.spec(), steps, samples);
  pqa::write_sweep_csv(output, result);
  std::cout << "sweep T=" << pqa::format_double(flags.total_time) << ", "
            << steps << " steps: success probability "
            << pqa::format_double(result.success_probability) << " -> "
            << output << "\n";
  return 0;
}

// Realize each coupler's pair weight as a JRM: solve E_JRM against the
// closed-form coupling, self-consistently with the dressed Transmon
// energies (each qubit's effective Josephson energy includes every ring it
// touches).
int run_hardware(const std::string& input, const std::string& output,
                 double ec, double ej, double scale, double drive_amp) {
  namespace hw = pqa::hardware;
  pqa::CompiledProgram program =
      pqa::load_compiled(pqa::read_text_file(input));
  const pqa::TwoBodyModel& model = program.model;

  // A qubit's total coupling is capped: sum_c g_c = (E_C/2) sum x_c / E_tot
  // < E_C/2, so the scale must budget the busiest qubit's summed weights.
  std::vector<double> weight_sum(static_cast<std::size_t>(model.n_spins),
                                 0.0);
  for (const auto& term : model.pair_terms) {
    weight_sum[static_cast<std::size_t>(term.a)] += std::abs(term.weight);
    weight_sum[static_cast<std::size_t>(term.b)] += std::abs(term.weight);
  }
  const double busiest =
      *std::max_element(weight_sum.begin(), weight_sum.end());
  if (busiest == 0.0) throw pqa::SchemaError("model has no pair terms");
  if (scale <= 0.0) scale = 0.8 * (ec / 2.0) / busiest;
  if (scale * busiest >= ec / 2.0) {
    throw pqa::SchemaError(
        "summed couplings at a qubit would exceed the E_C/2 bound; lower "
        "--scale");
  }

  std::vector<double> target_g(model.pair_terms.size());
  for (std::size_t c = 0; c < model.pair_terms.size(); ++c) {
    target_g[c] = std::abs(model.pair_terms[c].weight) * scale;
  }

  std::vector<double> e_jrm(model.pair_terms.size(), 0.0);
  std::vector<double> e_total(static_cast<std::size_t>(model.n_spins), ej);
  for (int sweep = 0; sweep < 80; ++sweep) {
    for (std::size_t c = 0; c < model.pair_terms.size(); ++c) {
      const double ea =
          e_total[static_cast<std::size_t>(model.pair_terms[c].a)] - e_jrm[c];
      const double eb =
          e_total[static_cast<std::size_t>(model.pair_terms[c].b)] - e_jrm[c];
      auto g_of = [&](double x) {
        return 0.5 * ec * x / std::sqrt((ea + x) * (eb + x));
      };
      double lo = 0.0, hi = 1.0;
      while (g_of(hi) < target_g[c] && hi < 1e9 * ej) hi *= 2.0;
      if (g_of(hi) < target_g[c]) {
        throw pqa::SchemaError(
            "coupling target is unreachable at this circuit; lower --scale");
      }
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g_of(mid) < target_g[c] ? lo : hi) = mid;
      }
      e_jrm[c] = 0.5 * (lo + hi);
    }
    std::fill(e_total.begin(), e_total.end(), ej);
    for (std::size_t c = 0; c < model.pair_terms.size(); ++c) {
      e_total[static_cast<std::size_t>(model.pair_terms[c].a)] += e_jrm[c];
      e_total[static_cast<std::size_t>(model.pair_terms[c].b)] += e_jrm[c];
    }
  }

  std::vector<double> g_sum(static_cast<std::size_t>(model.n_spins), 0.0);
  std::vector<double> g_real(model.pair_terms.size(), 0.0);
  for (std::size_t c = 0; c < model.pair_terms.size(); ++c) {
    const auto& term = model.pair_terms[c];
    g_real[c] = 0.5 * ec * e_jrm[c] /
                std::sqrt(e_total[static_cast<std::size_t>(term.a)] *
                          e_total[static_cast<std::size_t>(term.b)]);
    if (std::abs(g_real[c] - target_g[c]) > 0.01 * target_g[c]) {
      throw pqa::SchemaError(
          "coupler solve did not converge; lower --scale");
    }
    g_sum[static_cast<std::size_t>(term.a)] += g_real[c];
    g_sum[static_cast<std::size_t>(term.b)] += g_real[c];
  }

  std::map<int, double> z_total;
  for (const auto& term : model.constraint_fields) {
    z_total[term.site] += term.weight;
  }
  for (const auto& term : model.z_fields) z_total[term.site] += term.weight;

  if (drive_amp >= ec) {
    std::cerr << "hardware: drive amplitude " << drive_amp
              << " is not below E_C; qubit projection invalid\n";
  }
  std::ostringstream csv;
  csv << "row,id_a,id_b,E_C,E_J,E_total,omega_d,A,J_target,E_JRM,g\n";
  for (int q = 0; q < model.n_spins; ++q) {
    const double e_q =
        std::sqrt(8.0 * ec * e_total[static_cast<std::size_t>(q)]);
    const double j_target = scale * z_total[q];
    const double omega = hw::drive_frequency_for_target(
        e_q, g_sum[static_cast<std::size_t>(q)], j_target);
    csv << "qubit," << q << ",," << pqa::format_double(ec) << ","
        << pqa::format_double(ej) << ","
        << pqa::format_double(e_total[static_cast<std::size_t>(q)]) << ","
        << pqa::format_double(omega) << "," << pqa::format_double(drive_amp)
        << "," << pqa::format_double(j_target) << ",,\n";
  }
  for (std::size_t c = 0; c < model.pair_terms.size(); ++c) {
    const auto& term = model.pair_terms[c];
    csv << "coupler," << term.a << "," << term.b << ",,,,,,,"
        << pqa::format_double(e_jrm[c]) << "," << pqa::format_double(g_real[c])
        << "\n";
  }
  pqa::write_text_file(output, csv.str());
  std::cout << "hardware table (" << model.n_spins << " qubits, "
            << model.pair_terms.size() << " couplers, scale "
            << pqa::format_double(scale) << " GHz/unit) -> " << output << "\n";
  return 0;
}

// End-to-end desk demo on the 7-spin single-plaquette system: certify the
// decomposition, trace the sweep spectrum with and without programmable
// fields, compare protocols, and run the adiabatic sweep.
int run_demo(unsigned seed, const std::string& out_dir, double total_time,
             int steps) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto path = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };

  std::mt19937 rng(seed);
  std::vector<double> fields(4);
  for (double& f : fields) f = 0.2 * (2.0 * uniform01(rng) - 1.0);

  const pqa::TwoBodyModel zero_model = pqa::single_plaquette_model(1.0);
  const pqa::TwoBodyModel seeded_model =
      pqa::single_plaquette_model(1.0, fields);

  // oracle certification of the plaquette decomposition
  pqa::ParityConstraint plaquette{{0, 1, 2, 3}, 1.0, pqa::Parity::even};
  pqa::TwoBodyModel constraint_sector = zero_model;
  constraint_sector.z_fields.clear();
  const auto eq = pqa::verify_equivalence(
      pqa::IsingSystem::from_constraint(plaquette),
      pqa::IsingSystem::from_model(constraint_sector), plaquette.members);
  if (!eq.ok) {
    throw pqa::VerificationError(
        "single-plaquette model fails the oracle equivalence check");
  }
  const auto report = pqa::ground_report(
      pqa::IsingSystem::from_model(constraint_sector), plaquette.members);
  std::cout << "plaquette gadget: ok (gap "
            << pqa::format_double(eq.gap_decomposed) << ", ground degeneracy "
            << report.ground_states.size() << ")\n";

  pqa::ScheduleSpec schedule;
  schedule.total_time = total_time;

  const auto zero_system = pqa::ScheduledHamiltonian::from_model(zero_model);
  const auto seeded_system =
      pqa::ScheduledHamiltonian::from_model(seeded_model);

  pqa::write_trace_csv(path("trace_zero_fields.csv"),
                       pqa::spectrum_trace(zero_system, schedule));
  const auto seeded_trace = pqa::spectrum_trace(seeded_system, schedule);
  pqa::write_trace_csv(path("trace_seeded_fields.csv"), seeded_trace);
  pqa::write_comparison_csv(path("protocol_comparison.csv"),
                            pqa::compare_protocols(seeded_system, schedule));

  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < seeded_trace.levels.rows(); ++k) {
    min_gap = std::min(min_gap,
                       seeded_trace.levels(k, 1) - seeded_trace.levels(k, 0));
  }

  pqa::SweepResult sweep = pqa::evolve(seeded_system, schedule, steps, 50);
  pqa::write_sweep_csv(path("sweep_success.csv"), sweep);

  std::cout << "fields:";
  for (double f : fields) std::cout << " " << pqa::format_double(f);
  std::cout << "\nminimal sweep gap " << pqa::format_double(min_gap)
            << " (adiabaticity wants T >> 1/gap^2)\n"
            << "sweep T=" << pqa::format_double(total_time)
            << ": success probability "
            << pqa::format_double(sweep.success_probability) << "\n"
            << "wrote " << out_dir << "/{trace_zero_fields,"
            << "trace_seeded_fields,protocol_comparison,sweep_success}.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pqa: parity-lattice compiler and exact annealing simulator.\n"
      "Exit codes: 0 ok, 2 malformed input, 3 resource cap exceeded, "
      "4 verification failure."};
  app.require_subcommand(1);

  std::string input, output;
  std::string policy = "balanced", scope = "all", grouping = "ne-sw";
  double strength = 0.0;

  auto* compile = app.add_subcommand(
      "compile", "compile a problem file to a pair-interaction program");
  compile->add_option("input", input, "problem JSON")->required();
  compile->add_option("-o,--output", output, "output path")
      ->default_val("compiled.json");
  compile->add_option("--policy", policy, "balanced|paper-example|left-pair")
      ->check(CLI::IsMember({"balanced", "paper-example", "left-pair"}));
  compile->add_option("--driver-scope", scope, "all|logical-only")
      ->check(CLI::IsMember({"all", "logical-only"}));
  compile->add_option("--grouping", grouping, "ne-sw|nw-es")
      ->check(CLI::IsMember({"ne-sw", "nw-es"}));
  compile->add_option("--strength", strength,
                      "constraint strength C (default: 4*sum|J|+1)");

  auto* verify = app.add_subcommand(
      "verify", "certify a compiled program against the oracle");
  verify->add_option("input", input, "compiled JSON")->required();
  verify->add_option("-o,--output", output, "report path")
      ->default_val("verify_report.json");

  ScheduleFlags spectrum_flags;
  int levels = 16, spectrum_steps = 101;
  bool compare = false;
  auto* spectrum = app.add_subcommand(
      "spectrum", "time-resolved low-lying spectrum of the sweep");
  spectrum->add_option("input", input, "compiled JSON")->required();
  spectrum->add_option("-o,--output", output, "CSV path")
      ->default_val("spectrum.csv");
  add_schedule_flags(spectrum, spectrum_flags);
  spectrum->add_option("--levels", levels, "number of levels to trace");
  spectrum->add_option("--steps", spectrum_steps, "number of time samples");
  spectrum->add_flag("--compare", compare,
                     "emit ramp and always-on traces side by side");

  ScheduleFlags anneal_flags;
  int anneal_steps = 1000, samples = 50;
  auto* anneal =
      app.add_subcommand("anneal", "propagate the sweep and report success");
  anneal->add_option("input", input, "compiled JSON")->required();
  anneal->add_option("-o,--output", output, "CSV path")
      ->default_val("sweep.csv");
  add_schedule_flags(anneal, anneal_flags);
  anneal->add_option("--steps", anneal_steps, "propagation steps");
  anneal->add_option("--samples", samples, "success-trace samples");

  double ec = 0.3, ej = 12.0, scale = 0.0, drive_amp = 0.1;
  auto* hardware = app.add_subcommand(
      "hardware", "emit the Transmon/JRM parameter table for a program");
  hardware->add_option("input", input, "compiled JSON")->required();
  hardware->add_option("-o,--output", output, "CSV path")
      ->default_val("hardware.csv");
  hardware->add_option("--ec", ec, "Transmon charging energy (GHz)");
  hardware->add_option("--ej", ej, "Transmon Josephson energy (GHz)");
  hardware->add_option("--scale", scale,
                       "GHz per model unit (default: auto from E_C/2)");
  hardware->add_option("--drive-amp", drive_amp,
                       "microwave drive amplitude (GHz)");

  unsigned seed = 7;
  std::string out_dir = "demo_out";
  double demo_time = 30.0;
  int demo_steps = 600;
  auto* demo = app.add_subcommand(
      "demo", "single-plaquette 7-spin pipeline, end to end");
  demo->add_option("--seed", seed, "seed for the programmable fields");
  demo->add_option("--out-dir", out_dir, "output directory");
  demo->add_option("--T", demo_time, "sweep time");
  demo->add_option("--steps", demo_steps, "propagation steps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compile->parsed()) {
      return run_compile(input, output, policy, scope, grouping, strength);
    }
    if (verify->parsed()) return run_verify(input, output);
    if (spectrum->parsed()) {
      return run_spectrum(input, output, spectrum_flags, levels,
                          spectrum_steps, compare);
    }
    if (anneal->parsed()) {
      return run_anneal(input, output, anneal_flags, anneal_steps, samples);
    }
    if (hardware->parsed()) {
      return run_hardware(input, output, ec, ej, scale, drive_amp);
    }
    if (demo->parsed()) return run_demo(seed, out_dir, demo_time, demo_steps);
  } catch (const pqa::SchemaError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitSchema;
  } catch (const pqa::CapacityError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitCapacity;
  } catch (const pqa::VerificationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
