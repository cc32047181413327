#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nstore/commands.hpp"

namespace {

struct Options {
  std::string config;
  std::string trace;
  std::string out = "out";
  std::string engine;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> cap;
  std::string snapshot;
  std::string format = "dot";
};

nstore::RunConfig resolve_config(const Options& o) {
  nstore::RunConfig c;
  if (o.config.empty()) {
    c = nstore::preset_config("wildlife-deer");
  } else if (nstore::fs::exists(o.config)) {
    c = nstore::load_config(o.config);
  } else {
    // A bare preset name is accepted in place of a file.
    c = nstore::preset_config(o.config);
  }
  if (o.seed) c.workload.seed = *o.seed;
  if (o.cap) {
    c.setup.hive.capacity_bytes = *o.cap;
    c.setup.cam.capacity_bytes = *o.cap;
  }
  if (!o.engine.empty()) c.engine = o.engine;
  c.validate();
  return c;
}

std::optional<nstore::fs::path> trace_path(const Options& o) {
  if (o.trace.empty()) return std::nullopt;
  return nstore::fs::path(o.trace);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nstore: learning content-addressable memory simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", o.config, "Config file (JSON) or preset name");
    cmd->add_option("--seed", o.seed, "Override workload.seed");
    cmd->add_option("--cap", o.cap, "Override the memory cap in bytes (both engines)");
    cmd->add_option("-o,--out", o.out, "Output directory");
  };

  auto* gen = app.add_subcommand("generate", "Write a corpus, manifest and trace");
  add_common(gen);
  auto* run = app.add_subcommand("run", "Replay a trace on one engine");
  add_common(run);
  run->add_option("-t,--trace", o.trace, "Trace file (defaults to the config's workload)");
  run->add_option("-e,--engine", o.engine, "ns or cam")->check(CLI::IsMember({"ns", "cam"}));
  auto* cmp = app.add_subcommand("compare", "Replay a trace on both engines and compare");
  add_common(cmp);
  cmp->add_option("-t,--trace", o.trace, "Trace file (defaults to the config's workload)");
  auto* ins = app.add_subcommand("inspect", "Render a snapshot");
  ins->add_option("snapshot", o.snapshot, "Snapshot file")->required();
  ins->add_option("-f,--format", o.format, "dot or text")->check(CLI::IsMember({"dot", "text"}));
  ins->add_option("-o,--out", o.out, "Write the rendering here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? nstore::kExitOk : nstore::kExitValidation;
  }

  try {
    if (*gen) {
      nstore::cmd_generate(resolve_config(o), o.out, std::cout);
    } else if (*run) {
      nstore::cmd_run(resolve_config(o), trace_path(o), o.out, std::cout);
    } else if (*cmp) {
      nstore::cmd_compare(resolve_config(o), trace_path(o), o.out, std::cout);
    } else if (*ins) {
      const std::string text = nstore::cmd_inspect(o.snapshot, o.format);
      if (ins->count("--out")) {
        nstore::write_text(o.out, text);
      } else {
        std::cout << text;
      }
    }
  } catch (const nstore::StorageFull& e) {
    std::cerr << "storage full: " << e.what() << "\n";
    return nstore::kExitStorageFull;
  } catch (const nstore::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return nstore::kExitIo;
  } catch (const nstore::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nstore::kExitValidation;
  }
  return nstore::kExitOk;
}
