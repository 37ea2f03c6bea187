// Command-line entry points: `run` executes a configured population run and
// writes its artifacts, `diag` runs one-shot diagonalization searches over a
// file of codes, `eval` evaluates a single code.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfedit/selfedit.hpp"

namespace {

int fail(const std::string& msg, int code) {
  std::cerr << "error: " << msg << "\n";
  return code;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override,
            const std::string& out_dir) {
  auto text = read_file(config_path);
  if (!text) return fail("cannot read config: " + config_path, 1);
  selfedit::ConfigResult parsed = selfedit::parse_config(*text);
  if (!parsed.ok()) {
    for (const std::string& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return 1;
  }
  selfedit::RunConfig cfg = parsed.config;
  if (seed_override) cfg.seed = *seed_override;

  selfedit::RunResult result = selfedit::Engine(cfg).run();

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) return fail("cannot create output dir: " + out_dir, 1);
  std::filesystem::path dir(out_dir);
  if (!write_file(dir / "events.jsonl", selfedit::events_to_jsonl(result.events)))
    return fail("cannot write events.jsonl", 1);
  if (!write_file(dir / "metrics.csv", selfedit::metrics_to_csv(result.report)))
    return fail("cannot write metrics.csv", 1);
  if (!write_file(dir / "report.json", selfedit::report_to_json(result.report).dump(2) + "\n"))
    return fail("cannot write report.json", 1);

  std::cout << "generations: " << result.report.generations_executed
            << "  population: " << result.population.size()
            << "  events: " << result.events.size() << "\n";
  if (result.report.extinct) {
    std::cout << "population extinct\n";
    return 2;
  }
  return 0;
}

std::optional<std::vector<selfedit::Code>> parse_code_lines(
    const std::vector<std::string>& lines, std::size_t first_lineno) {
  std::vector<selfedit::Code> codes;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      codes.push_back(selfedit::parse_text(lines[i]));
    } catch (const selfedit::ParseError& e) {
      std::cerr << "line " << (first_lineno + i) << ": " << e.what() << "\n";
      return std::nullopt;
    }
  }
  return codes;
}

int cmd_diag(const std::string& file, const std::string& mode, int max_size,
             std::int64_t fuel, std::int64_t max_candidates, std::int64_t lit_range) {
  auto text = read_file(file);
  if (!text) return fail("cannot read file: " + file, 1);

  std::vector<std::string> lines;
  {
    std::istringstream in(*text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  }

  selfedit::SearchBudget budget;
  budget.max_size = max_size;
  budget.fuel_per_eval = fuel;
  budget.max_candidates = max_candidates;
  budget.lit_range = lit_range;

  if (mode == "fit") {
    auto seq = parse_code_lines(lines, 1);
    if (!seq) return 1;
    if (seq->size() < 2) return fail("fit mode needs at least two codes", 1);
    auto found = selfedit::find_fitting_recursor(*seq, budget);
    if (!found) {
      std::cout << "none\n";
      return 3;
    }
    std::cout << selfedit::to_text(*found) << "\n";
    return 0;
  }
  if (mode == "separate") {
    auto split = std::find(lines.begin(), lines.end(), "---");
    if (split == lines.end())
      return fail("separate mode needs two sections split by a '---' line", 1);
    std::vector<std::string> rej_lines(lines.begin(), split);
    std::vector<std::string> ret_lines(split + 1, lines.end());
    auto rejected = parse_code_lines(rej_lines, 1);
    if (!rejected) return 1;
    auto retained = parse_code_lines(ret_lines, rej_lines.size() + 2);
    if (!retained) return 1;
    std::optional<selfedit::TestingCode> found;
    try {
      found = selfedit::negative_diagonalize(*rejected, *retained, budget);
    } catch (const std::invalid_argument& e) {
      return fail(e.what(), 1);
    }
    if (!found) {
      std::cout << "none\n";
      return 3;
    }
    std::cout << selfedit::to_text(found->code) << "\n";
    return 0;
  }
  return fail("mode must be fit or separate", 1);
}

int cmd_eval(const std::string& code_text, const std::string& input_text,
             std::int64_t fuel) {
  selfedit::Code program, input;
  try {
    program = selfedit::parse_text(code_text);
  } catch (const selfedit::ParseError& e) {
    return fail(std::string("code: ") + e.what(), 1);
  }
  try {
    input = selfedit::parse_text(input_text);
  } catch (const selfedit::ParseError& e) {
    return fail(std::string("input: ") + e.what(), 1);
  }
  selfedit::EvalOutcome out = selfedit::eval(program, input, fuel);
  if (out.ok())
    std::cout << selfedit::to_text(out.value()) << "\n";
  else
    std::cout << selfedit::eval_error_name(out.error()) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selfedit: self-editing code populations with diagonalization"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "execute a configured population run");
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_value = 0;
  run->add_option("--config", config_path, "path to key=value config")->required();
  auto* seed_opt = run->add_option("--seed", seed_value, "override the config seed");
  run->add_option("--out", out_dir, "output directory");

  auto* diag = app.add_subcommand("diag", "search for a fitting or separating code");
  std::string diag_file, diag_mode = "fit";
  int diag_max_size = 4;
  std::int64_t diag_fuel = 256, diag_candidates = 200000, diag_lit_range = 2;
  diag->add_option("file", diag_file, "newline-separated code texts")->required();
  diag->add_option("--mode", diag_mode, "fit | separate");
  diag->add_option("--max-size", diag_max_size, "simplicity bound");
  diag->add_option("--fuel", diag_fuel, "fuel per evaluation");
  diag->add_option("--max-candidates", diag_candidates, "candidate bound");
  diag->add_option("--lit-range", diag_lit_range, "literal payload bound");

  auto* ev = app.add_subcommand("eval", "evaluate a code on an input");
  std::string ev_code, ev_input = "(lit 0)";
  std::int64_t ev_fuel = 1024;
  ev->add_option("code", ev_code, "program text")->required();
  ev->add_option("input", ev_input, "input text");
  ev->add_option("--fuel", ev_fuel, "fuel budget");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed())
    return cmd_run(config_path,
                   seed_opt->count() ? std::optional<std::uint64_t>(seed_value)
                                     : std::nullopt,
                   out_dir);
  if (diag->parsed())
    return cmd_diag(diag_file, diag_mode, diag_max_size, diag_fuel, diag_candidates,
                    diag_lit_range);
  if (ev->parsed()) return cmd_eval(ev_code, ev_input, ev_fuel);
  return 1;
}
