// vndn: run scenarios, generate them from templates, and report on event logs.
//
// Exit codes: 0 success, 2 validation error, 3 runtime error.

#include "vndn/harness/generate.hpp"
#include "vndn/harness/simulator.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

constexpr int exit_validation = 2;
constexpr int exit_runtime = 3;

namespace fs = std::filesystem;
using namespace vndn;

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, const fs::path& out)
{
  auto scenario = harness::load_scenario(scenario_path);
  auto s = seed.value_or(scenario.seed);
  auto result = harness::run(scenario, s);
  fs::create_directories(out);
  result.log.write((out / "events.jsonl").string());
  harness::report(result.stats, harness::ReportFormat::Json, out);
  harness::report(result.stats, harness::ReportFormat::Csv, out);
  std::ofstream(out / "digest.txt") << result.digest() << "\n";
  std::cout << scenario.name << " seed=" << s << " events=" << result.log.size() << " digest=" << result.digest()
            << "\n";
  return 0;
}

int cmd_gen(const std::string& name, const std::vector<std::string>& params, const fs::path& out)
{
  auto scenario = harness::gen_scenario(name, harness::Params::parse(params));
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream f(out);
  if (!f) throw harness::IoError(out.string() + ": cannot write");
  f << harness::to_json(scenario).dump(2) << "\n";
  std::cout << "wrote " << out.string() << " (" << scenario.nodes.size() << " nodes)\n";
  return 0;
}

int cmd_report(const std::string& log_path, const std::string& format, const fs::path& out)
{
  auto stats = harness::aggregate_file(log_path);
  auto fmt = format == "json" ? harness::ReportFormat::Json : harness::ReportFormat::Csv;
  for (const auto& p : harness::report(stats, fmt, out)) std::cout << "wrote " << p.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Vehicular NDN simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario and write the event log and stats");
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string run_out;
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--seed", seed, "run seed (defaults to the scenario's)");
  run->add_option("--out", run_out, "output directory")->required();

  auto* gen = app.add_subcommand("gen", "generate a scenario from a template");
  std::string template_name;
  std::vector<std::string> params;
  std::string gen_out;
  gen->add_option("--template", template_name, "template name")
    ->required()
    ->check(CLI::IsMember(vndn::harness::template_names()));
  gen->add_option("--param", params, "template parameter key=value (repeatable)");
  gen->add_option("--out", gen_out, "scenario file to write")->required();

  auto* rep = app.add_subcommand("report", "aggregate an event log into stats");
  std::string log_path;
  std::string format = "json";
  std::string rep_out;
  rep->add_option("--log", log_path, "event log (events.jsonl)")->required();
  rep->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  rep->add_option("--out", rep_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e) {
    auto code = app.exit(e);
    return code == 0 ? 0 : exit_validation;
  }

  try {
    if (*run) return cmd_run(scenario_path, seed, run_out);
    if (*gen) return cmd_gen(template_name, params, gen_out);
    return cmd_report(log_path, format, rep_out);
  }
  catch (const vndn::harness::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return exit_validation;
  }
  catch (const vndn::harness::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return exit_validation;
  }
  catch (const vndn::harness::BadParams& e) {
    std::cerr << "bad parameters: " << e.what() << "\n";
    return exit_validation;
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
}
