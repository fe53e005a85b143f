// tools/stereoleak.cc

// Copyright 2026 The stereoleak Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stereoleak/config.hpp"
#include "stereoleak/pipeline.hpp"

namespace {

bool IsBoolKey(const std::string &key) {
  return key == "bonferroni" || key == "raw" || key == "cross_only" ||
         key == "normalize_by_baseline";
}

bool IsListKey(const std::string &key) { return key == "dump" || key == "monolingual_dump"; }

std::string Dashed(std::string key) {
  for (char &c : key)
    if (c == '_') c = '-';
  return key;
}

}  // namespace

int main(int argc, char *argv[]) {
  using namespace stereoleak;
  const char *usage =
      "Stereotype-leakage analysis: ingest survey exports, score probe dumps, fit\n"
      "per-language mixed models and render reports.\n"
      "Settings come from a key = value config file (--config, or the\n"
      "STEREOLEAK_CONFIG environment variable); every key also has a flag of the\n"
      "same name and flags win.\n";

  CLI::App app{usage, "stereoleak"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "Pipeline config file");

  std::map<std::string, std::vector<std::string>> values;
  for (const std::string &key : ConfigKeys()) values[key];
  for (const std::string &key : ConfigKeys()) {
    const std::string flag = "--" + Dashed(key);
    if (IsBoolKey(key)) {
      app.add_flag_callback(flag, [&values, key] { values[key].push_back("true"); },
                            "Config key " + key);
    } else {
      app.add_option(flag, values[key], "Config key " + key);
    }
  }

  struct Command {
    const char *name;
    const char *help;
    StepSummary (*run)(const RunConfig &);
  };
  const std::vector<Command> commands = {
      {"validate", "Check the registry and that every configured input parses", RunValidate},
      {"ingest-survey", "Quality-gate and aggregate the survey export", RunIngest},
      {"score", "Turn probe dumps into per-language model profiles", RunScore},
      {"fit", "Fit one mixed model per (model, target language)", RunFit},
      {"leaks", "Extract leaked-trait candidates and category correlations", RunLeaks},
      {"report", "Render flow graphs, coefficient tables and radar data", RunReport},
      {"simulate", "Planted-coefficient and null Monte-Carlo runs", RunSimulate},
      {"run", "ingest-survey, score, fit, leaks and report in order", nullptr},
  };
  std::vector<CLI::App *> subs;
  for (const Command &c : commands) subs.push_back(app.add_subcommand(c.name, c.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "stereoleak: usage error: " << e.what() << "\n"
              << "Run 'stereoleak --help' for usage.\n";
    return 2;
  }

  std::string name = "?";
  try {
    RunConfig config;
    if (config_path.empty()) {
      if (const char *env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
        config_path = env;
      }
    }
    if (!config_path.empty()) config = LoadConfig(config_path);
    for (const std::string &key : ConfigKeys()) {
      const std::vector<std::string> &given = values[key];
      if (given.empty()) continue;
      if (IsListKey(key)) {
        (key == "dump" ? config.dumps : config.monolingual_dumps).clear();
        for (const std::string &v : given) ApplySetting(config, key, v, {});
      } else {
        ApplySetting(config, key, given.back(), {});
      }
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      name = commands[i].name;
      if (commands[i].run != nullptr) {
        std::cout << commands[i].run(config).Line() << std::endl;
      } else {
        for (const StepSummary &s : RunAll(config)) std::cout << s.Line() << std::endl;
      }
    }
  } catch (const Error &e) {
    std::cerr << "stereoleak " << name << " status=error kind=" << ErrorKindName(e.kind())
              << ": " << e.what() << std::endl;
    return e.kind() == ErrorKind::kUsage ? 2 : 1;
  } catch (const std::exception &e) {
    std::cerr << "stereoleak " << name << " status=error kind=internal: " << e.what()
              << std::endl;
    return 1;
  }
  return 0;
}
