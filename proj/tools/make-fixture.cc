// tools/make-fixture.cc

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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stereoleak/fixture.hpp"

int main(int argc, char *argv[]) {
  using namespace stereoleak;
  const char *usage =
      "Writes the deterministic synthetic corpus (survey export, probe dumps and a\n"
      "ready-to-run config) into <out-dir>.\n";
  CLI::App app{usage, "make-fixture"};
  std::string out_dir, registry_path;
  FixtureOptions options;
  app.add_option("out-dir", out_dir, "Directory to write")->required();
  app.add_option("--seed", options.seed, "Generator seed");
  app.add_option("--registry", registry_path, "Registry file (default: bundled)");
  CLI11_PARSE(app, argc, argv);

  try {
    const Registry registry =
        Registry::LoadFile(registry_path.empty() ? BundledRegistryPath() : std::filesystem::path(registry_path));
    const FixtureManifest m = GenerateFixture(out_dir, registry, options);
    std::cout << "make-fixture status=ok seed=" << options.seed
              << " dumps=" << m.dumps.size() + m.monolingual_dumps.size()
              << " config=" << m.config.string() << std::endl;
  } catch (const Error &e) {
    std::cerr << "make-fixture status=error kind=" << ErrorKindName(e.kind()) << ": " << e.what()
              << std::endl;
    return 1;
  }
  return 0;
}
