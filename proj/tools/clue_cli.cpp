#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "clue/tournament.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kGateway = 3, kDivergence = 4 };

int fail(int code, const std::string& what) {
  std::cerr << "clue-sim: " << what << "\n";
  return code;
}

// Maps the library's error hierarchy onto the stable exit codes.
template <class F>
int guarded(F f) {
  try {
    return f();
  } catch (const clue::ReplayDivergence& e) {
    return fail(kDivergence, e.what());
  } catch (const clue::GatewayError& e) {
    return fail(kGateway, e.what());
  } catch (const clue::GatewayUnavailable& e) {
    return fail(kGateway, e.what());
  } catch (const clue::FixtureMismatch& e) {
    return fail(kGateway, e.what());
  } catch (const std::exception& e) {
    return fail(kConfig, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clue tournament simulator"};
  app.require_subcommand(1);

  std::string spec_path, out_dir, mock_path, prompts_dir;
  int parallel = 1;
  auto* run = app.add_subcommand("run", "Play a tournament and write logs and a report");
  run->add_option("--spec", spec_path, "Tournament spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--parallel", parallel, "Games played concurrently")->check(CLI::PositiveNumber);
  run->add_option("--mock", mock_path, "Offline model transcript")->check(CLI::ExistingFile);
  run->add_option("--prompts", prompts_dir, "Directory overriding the prompt templates")
      ->check(CLI::ExistingDirectory);

  std::string log_path;
  auto* replay = app.add_subcommand("replay", "Re-run a game log and check it reproduces exactly");
  replay->add_option("--log", log_path, "game_<k>.jsonl")->required()->check(CLI::ExistingFile);

  std::string report_dir, format = "table";
  auto* report = app.add_subcommand("report", "Rebuild the report from the logs in a directory");
  report->add_option("--dir", report_dir, "Tournament directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (*run) {
    return guarded([&] {
      const auto spec = clue::TournamentSpec::load(spec_path);
      clue::TournamentOptions options;
      options.parallel = parallel;
      if (!mock_path.empty()) options.mock = clue::MockFixture::load(mock_path);
      std::optional<clue::PromptTemplates> templates;
      if (prompts_dir.empty()) {
        if (const char* env = std::getenv("CLUE_PROMPT_DIR"); env && *env) prompts_dir = env;
      }
      if (!prompts_dir.empty()) {
        templates = clue::PromptTemplates::load(prompts_dir);
        options.templates = &*templates;
      }
      const auto result = clue::run_tournament(spec, options);
      const auto dir = clue::write_tournament(result, out_dir);
      std::cout << result.report.table();
      std::cout << "wrote " << result.games.size() << " game log(s) to " << dir.string() << "\n";
      return static_cast<int>(kOk);
    });
  }
  if (*replay) {
    return guarded([&] {
      const auto log = clue::read_log(log_path);
      const auto result = clue::replay(log);
      std::cout << "replayed " << result.events.size() << " events over " << result.rounds_played
                << " round(s): no divergence\n";
      return static_cast<int>(kOk);
    });
  }
  return guarded([&] {
    const auto built = clue::build_report(clue::read_logs(report_dir));
    if (format == "csv") {
      std::cout << built.summary_csv();
    } else {
      std::cout << built.table();
    }
    return static_cast<int>(kOk);
  });
}
