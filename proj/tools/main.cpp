#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rs/accs.hpp"
#include "rs/coherence.hpp"
#include "rs/reach.hpp"
#include "rs/semantics.hpp"
#include "rs/syntax.hpp"
#include "rs/traces.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw rs::Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw rs::Error("cannot write " + path);
  file << content;
}

bool json_mode(const std::string& format) { return format == "json"; }

void emit(const json& object) { std::cout << object.dump() << "\n"; }

rs::Policy parse_policy(const std::string& text) {
  if (text == "first") return rs::Policy::first();
  if (text == "forward") return rs::Policy::forward_only();
  if (text == "backward") return rs::Policy::backward_only();
  if (text.rfind("random:", 0) == 0) {
    return rs::Policy::random(std::stoull(text.substr(7)));
  }
  if (text == "interactive") {
    return rs::Policy::interactive(
        [](const rs::Structure&, const std::vector<rs::StepLabel>& labels)
            -> std::optional<std::size_t> {
          std::cout << "enabled steps:\n";
          for (std::size_t i = 0; i < labels.size(); ++i)
            std::cout << "  [" << i << "] " << labels[i].text() << "\n";
          for (;;) {
            std::cout << "choose> " << std::flush;
            std::string line;
            if (!std::getline(std::cin, line)) return std::nullopt;
            try {
              std::size_t index = std::stoul(line);
              if (index < labels.size()) return index;
            } catch (const std::exception&) {
            }
            std::cerr << "enter an index between 0 and " << labels.size() - 1 << "\n";
          }
        });
  }
  throw rs::Error("unknown policy \"" + text +
                  "\" (use first, random:SEED, forward, backward, interactive)");
}

const char* stop_reason_text(rs::StopReason reason) {
  switch (reason) {
    case rs::StopReason::fuel_exhausted: return "fuel-exhausted";
    case rs::StopReason::no_enabled_step: return "no-enabled-step";
    case rs::StopReason::stopped_by_chooser: return "stopped";
  }
  return "?";
}

int cmd_parse(const std::string& file, const std::string& format) {
  rs::Structure s = rs::parse_structure(read_input(file));
  if (json_mode(format)) {
    emit({{"command", "parse"}, {"verdict", "ok"}, {"structure", rs::print_structure(s)},
          {"size", rs::structure_size(s)}});
  } else {
    std::cout << rs::print_structure(s) << "\n";
  }
  return kExitOk;
}

int cmd_step(const std::string& file, const std::string& format) {
  rs::Structure s = rs::parse_structure(read_input(file));
  std::vector<rs::StepLabel> labels = rs::enabled_steps(s);
  if (json_mode(format)) {
    json list = json::array();
    for (const rs::StepLabel& label : labels) list.push_back(label.text());
    emit({{"command", "step"}, {"verdict", "ok"}, {"labels", list}});
  } else {
    for (const rs::StepLabel& label : labels) std::cout << label.text() << "\n";
  }
  return kExitOk;
}

int cmd_run(const std::string& file, const std::string& policy_text, std::uint64_t fuel,
            const std::string& emit_trace, const std::string& format) {
  rs::Structure s = rs::parse_structure(read_input(file));
  rs::RunResult result = rs::run(s, parse_policy(policy_text), fuel);
  rs::Structure final_state = result.trace.final_state();
  if (!emit_trace.empty()) write_output(emit_trace, rs::print_trace(result.trace));
  if (json_mode(format)) {
    emit({{"command", "run"},
          {"verdict", "ok"},
          {"final", rs::print_structure(final_state)},
          {"steps", result.trace.steps.size()},
          {"stop", stop_reason_text(result.stop)}});
  } else {
    std::cout << rs::print_structure(final_state) << "\n";
  }
  return kExitOk;
}

int cmd_nf(const std::string& file, const std::string& emit_trace, const std::string& format) {
  rs::Structure s = rs::parse_structure(read_input(file));
  auto [normal_form, trace] = rs::backward_normal_form(s);
  if (!emit_trace.empty()) write_output(emit_trace, rs::print_trace(trace));
  if (json_mode(format)) {
    emit({{"command", "nf"},
          {"verdict", "ok"},
          {"normal_form", rs::print_structure(normal_form)},
          {"steps", trace.steps.size()}});
  } else {
    std::cout << rs::print_structure(normal_form) << "\n";
  }
  return kExitOk;
}

int cmd_standardize(const std::string& file, const std::string& emit_trace,
                    const std::string& format) {
  rs::Trace trace = rs::parse_trace(read_input(file));
  rs::StandardizeResult result = rs::standardize(trace);
  std::string text = rs::print_trace(result.trace);
  for (const rs::StuckAdjacency& stuck : result.stuck)
    text += "# stuck adjacency at step " + std::to_string(stuck.index + 1) + ": " + stuck.reason +
            "\n";
  if (!emit_trace.empty()) write_output(emit_trace, text);
  if (json_mode(format)) {
    json stuck = json::array();
    for (const rs::StuckAdjacency& item : result.stuck)
      stuck.push_back({{"step", item.index + 1}, {"reason", item.reason}});
    emit({{"command", "standardize"},
          {"verdict", "ok"},
          {"trace", rs::print_trace(result.trace)},
          {"length", result.trace.steps.size()},
          {"stuck", stuck}});
  } else {
    std::cout << text;
  }
  return kExitOk;
}

int cmd_equiv(const std::string& file1, const std::string& file2, std::size_t bound,
              const std::string& format) {
  rs::Trace a = rs::parse_trace(read_input(file1));
  rs::Trace b = rs::parse_trace(read_input(file2));
  bool equivalent = rs::perm_equiv(a, b, bound);
  if (json_mode(format)) {
    emit({{"command", "equiv"},
          {"verdict", equivalent ? "equivalent" : "not-equivalent"},
          {"bound", bound}});
  } else {
    std::cout << (equivalent ? "equivalent" : "not equivalent") << "\n";
  }
  return equivalent ? kExitOk : kExitDomain;
}

int cmd_coherent(const std::string& file, const std::string& format) {
  rs::Structure s = rs::parse_structure(read_input(file));
  rs::CoherenceReport report = rs::is_coherent(s);
  if (json_mode(format)) {
    json violations = json::array();
    for (const rs::Violation& v : report.violations)
      violations.push_back({{"subject", v.subject},
                            {"kind", rs::violation_kind_text(v.kind)},
                            {"count", v.count}});
    emit({{"command", "coherent"},
          {"verdict", report.coherent ? "coherent" : "incoherent"},
          {"violations", violations}});
  } else if (report.coherent) {
    std::cout << "coherent\n";
  } else {
    for (const rs::Violation& v : report.violations)
      std::cout << "violation: " << rs::violation_kind_text(v.kind) << " " << v.subject
                << " (count " << v.count << ")\n";
  }
  return report.coherent ? kExitOk : kExitDomain;
}

int cmd_reach(const std::string& from, const std::string& to, bool oracle,
              std::uint64_t max_states, const std::string& witness_file,
              const std::string& format) {
  rs::Structure source = rs::parse_structure(read_input(from));
  rs::Structure target = rs::parse_structure(read_input(to));
  rs::ReachAnswer answer = oracle ? rs::reachable_bfs(source, target, max_states)
                                  : rs::reachable_coherent(source, target);
  if (answer.witness && !witness_file.empty())
    write_output(witness_file, rs::print_trace(*answer.witness));
  if (json_mode(format)) {
    json object{{"command", "reach"},
                {"verdict", rs::verdict_text(answer.verdict)},
                {"explored", answer.stats.explored}};
    if (answer.witness) object["witness_length"] = answer.witness->steps.size();
    emit(object);
  } else {
    std::cout << rs::verdict_text(answer.verdict) << "\n";
    if (answer.witness) std::cout << "witness length " << answer.witness->steps.size() << "\n";
  }
  switch (answer.verdict) {
    case rs::Verdict::reachable: return kExitOk;
    case rs::Verdict::unreachable: return kExitDomain;
    case rs::Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitDomain;
}

int cmd_compile(const std::string& file, const std::string& out, const std::string& format) {
  rs::Process p = rs::parse_process(read_input(file));
  rs::Encoding enc = rs::encode(p);
  std::string structure_text = rs::print_structure(enc.structure);
  if (!out.empty()) write_output(out, structure_text + "\n");
  if (json_mode(format)) {
    json triggers = json::object();
    for (const rs::Name& trigger : enc.triggers)
      triggers[trigger.text()] = enc.trigger_guards.at(trigger).text();
    emit({{"command", "compile"},
          {"verdict", "ok"},
          {"structure", structure_text},
          {"triggers", triggers}});
  } else {
    if (out.empty()) std::cout << structure_text << "\n";
    for (const rs::Name& trigger : enc.triggers)
      std::cout << "# trigger " << trigger.text() << " guards "
                << enc.trigger_guards.at(trigger).text() << "\n";
  }
  return kExitOk;
}

int cmd_correspond(const std::string& file, std::uint64_t max_states, const std::string& format) {
  rs::Process p = rs::parse_process(read_input(file));
  rs::CorrespondenceReport report = rs::correspondence_check(p, max_states);
  if (json_mode(format)) {
    emit({{"command", "correspond"},
          {"verdict", rs::check_outcome_text(report.outcome)},
          {"observations_equal", report.observations_equal},
          {"rccs_causally_consistent", report.rccs_causally_consistent},
          {"structure_causally_consistent", report.structure_causally_consistent},
          {"rccs_loop_lemma", report.rccs_loop_lemma},
          {"structure_loop_lemma", report.structure_loop_lemma},
          {"trigger_hygiene", report.trigger_hygiene},
          {"rccs_states", report.rccs_states},
          {"structure_states", report.structure_states},
          {"notes", report.notes}});
  } else {
    std::cout << rs::check_outcome_text(report.outcome) << "\n";
    if (report.outcome != rs::CheckOutcome::inconclusive) {
      std::cout << "observations equal: " << (report.observations_equal ? "yes" : "no") << "\n"
                << "causally consistent: interpreter "
                << (report.rccs_causally_consistent ? "yes" : "no") << ", structure "
                << (report.structure_causally_consistent ? "yes" : "no") << "\n"
                << "loop lemma: interpreter " << (report.rccs_loop_lemma ? "yes" : "no")
                << ", structure " << (report.structure_loop_lemma ? "yes" : "no") << "\n"
                << "trigger hygiene: " << (report.trigger_hygiene ? "yes" : "no") << "\n";
    }
    std::cout << "states: interpreter " << report.rccs_states << ", structure "
              << report.structure_states << "\n";
    for (const std::string& note : report.notes) std::cout << "note: " << note << "\n";
  }
  switch (report.outcome) {
    case rs::CheckOutcome::pass: return kExitOk;
    case rs::CheckOutcome::fail: return kExitDomain;
    case rs::CheckOutcome::inconclusive: return kExitInconclusive;
  }
  return kExitDomain;
}

int cmd_bench(const std::string& family, const std::vector<std::size_t>& sizes,
              const std::string& format) {
  if (family != "chain") throw rs::Error("unknown bench family \"" + family + "\"");
  std::vector<rs::BenchRow> rows = rs::chain_bench(sizes);
  double slope = rs::log_log_slope(rows);
  if (json_mode(format)) {
    json list = json::array();
    for (const rs::BenchRow& row : rows)
      list.push_back({{"gates", row.gates},
                      {"size", row.size},
                      {"steps", row.steps},
                      {"seconds", row.seconds}});
    emit({{"command", "bench"}, {"verdict", "ok"}, {"rows", list}, {"slope", slope}});
  } else {
    std::cout << "gates\tsize\tsteps\tseconds\n";
    for (const rs::BenchRow& row : rows)
      std::cout << row.gates << "\t" << row.size << "\t" << row.steps << "\t" << row.seconds
                << "\n";
    std::cout << "log-log slope " << slope << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for reversible signal/gate structures"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

  std::string file, file2, out, witness_file, emit_trace;
  std::string policy = "first";
  std::string family = "chain";
  std::uint64_t fuel = 1000;
  std::uint64_t max_states = 100000;
  std::size_t bound = 12;
  std::vector<std::size_t> sizes{100, 200, 400, 800, 1600, 3200};

  CLI::App* parse_cmd = app.add_subcommand("parse", "parse a structure and print it canonically");
  parse_cmd->add_option("file", file, "structure file or -")->required();

  CLI::App* print_cmd = app.add_subcommand("print", "alias of parse");
  print_cmd->add_option("file", file, "structure file or -")->required();

  CLI::App* step_cmd = app.add_subcommand("step", "list enabled step labels");
  step_cmd->add_option("file", file, "structure file or -")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "apply steps under a policy");
  run_cmd->add_option("file", file, "structure file or -")->required();
  run_cmd->add_option("--policy", policy, "first|random:SEED|forward|backward|interactive");
  run_cmd->add_option("--fuel", fuel, "maximum number of steps");
  run_cmd->add_option("--emit-trace", emit_trace, "write the trace to this file");

  CLI::App* nf_cmd = app.add_subcommand("nf", "backward normal form");
  nf_cmd->add_option("file", file, "structure file or -")->required();
  nf_cmd->add_option("--emit-trace", emit_trace, "write the backward trace to this file");

  CLI::App* std_cmd = app.add_subcommand("standardize", "normalize a trace");
  std_cmd->add_option("trace", file, "trace file or -")->required();
  std_cmd->add_option("--emit-trace", emit_trace, "write the standardized trace to this file");

  CLI::App* equiv_cmd = app.add_subcommand("equiv", "permutation equivalence of two traces");
  equiv_cmd->add_option("trace1", file, "first trace file")->required();
  equiv_cmd->add_option("trace2", file2, "second trace file")->required();
  equiv_cmd->add_option("--bound", bound, "maximum trace length");

  CLI::App* coherent_cmd = app.add_subcommand("coherent", "coherence report");
  coherent_cmd->add_option("file", file, "structure file or -")->required();

  CLI::App* reach_cmd = app.add_subcommand("reach", "decide reachability");
  reach_cmd->add_option("--from", file, "source structure file")->required();
  reach_cmd->add_option("--to", file2, "target structure file")->required();
  bool oracle = false;
  reach_cmd->add_flag("--oracle", oracle, "use the explicit-state search for general structures");
  reach_cmd->add_option("--max-states", max_states, "state bound for the oracle");
  reach_cmd->add_option("--witness", witness_file, "write a witness trace to this file");

  CLI::App* compile_cmd = app.add_subcommand("compile", "encode an asynchronous process");
  compile_cmd->add_option("file", file, "process file or -")->required();
  compile_cmd->add_option("-o,--output", out, "write the structure to this file");

  CLI::App* correspond_cmd =
      app.add_subcommand("correspond", "check the encoding against the reference interpreter");
  correspond_cmd->add_option("file", file, "process file or -")->required();
  correspond_cmd->add_option("--max-states", max_states, "state bound per side");

  CLI::App* bench_cmd = app.add_subcommand("bench", "scaling table for coherent reachability");
  bench_cmd->add_option("--family", family, "instance family (chain)");
  bench_cmd->add_option("--sizes", sizes, "gate counts")->delimiter(',');

  // let --format appear after the subcommand as well
  for (CLI::App* sub : {parse_cmd, print_cmd, step_cmd, run_cmd, nf_cmd, std_cmd, equiv_cmd,
                        coherent_cmd, reach_cmd, compile_cmd, correspond_cmd, bench_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*parse_cmd || *print_cmd) return cmd_parse(file, format);
    if (*step_cmd) return cmd_step(file, format);
    if (*run_cmd) return cmd_run(file, policy, fuel, emit_trace, format);
    if (*nf_cmd) return cmd_nf(file, emit_trace, format);
    if (*std_cmd) return cmd_standardize(file, emit_trace, format);
    if (*equiv_cmd) return cmd_equiv(file, file2, bound, format);
    if (*coherent_cmd) return cmd_coherent(file, format);
    if (*reach_cmd) return cmd_reach(file, file2, oracle, max_states, witness_file, format);
    if (*compile_cmd) return cmd_compile(file, out, format);
    if (*correspond_cmd) return cmd_correspond(file, max_states, format);
    if (*bench_cmd) return cmd_bench(family, sizes, format);
  } catch (const rs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
