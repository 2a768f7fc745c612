#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dctrack/dataset_io.hpp"
#include "dctrack/errors.hpp"
#include "dctrack/pipeline.hpp"
#include "dctrack/simulator.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSchema = 3;
constexpr int kExitAlignment = 4;

dctrack::KeyValueConfig loadConfig(const std::string& path) {
  if (path.empty()) return {};
  return dctrack::KeyValueConfig::fromFile(path);
}

void writeManifest(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dctrack::SchemaError("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
}

char hexDigit(unsigned v) { return "0123456789abcdef"[v & 0xf]; }

std::string hashHex(std::uint64_t h) {
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[i] = hexDigit(static_cast<unsigned>(h));
  return s;
}

int cmdGenerate(const std::string& config_path, const std::string& output,
                long seed_override, long events_override, const std::string& category) {
  auto cfg = loadConfig(config_path);
  if (seed_override >= 0) cfg.set("generate.seed", std::to_string(seed_override));
  if (events_override >= 0) cfg.set("generate.events", std::to_string(events_override));
  if (!category.empty()) cfg.set("generate.category", category);

  const auto sim = dctrack::SimulationConfig::fromConfig(cfg);
  const auto geometry = dctrack::Geometry::fromConfig(cfg);
  const auto events = dctrack::generateEvents(geometry, sim);
  const long rows = dctrack::writeEvents(events, output);

  long n_tracks = 0;
  for (const auto& ev : events) n_tracks += static_cast<long>(ev.truth.size());
  json manifest = {{"command", "generate"},
                   {"output", output},
                   {"config_hash", hashHex(cfg.hash())},
                   {"seed", sim.seed},
                   {"category", dctrack::categoryName(sim.category)},
                   {"n_events", static_cast<long>(events.size())},
                   {"n_tracks", n_tracks},
                   {"n_hits", rows}};
  writeManifest(output + ".manifest.json", manifest);
  std::cout << "wrote " << events.size() << " events, " << rows << " hits to " << output
            << '\n';
  return kExitOk;
}

int cmdReconstruct(const std::string& config_path, const std::string& input,
                   const std::string& output, bool no_fit, bool strict) {
  auto cfg = loadConfig(config_path);
  const auto geometry = dctrack::Geometry::fromConfig(cfg);
  auto opts = dctrack::RecoOptions::fromConfig(cfg);
  if (no_fit) opts.fit = false;

  dctrack::ValidationReport report;
  const auto events = dctrack::readEvents(input, geometry, report, strict);
  for (const auto& issue : report.issues) std::cerr << "warning: " << issue << '\n';

  const auto tracks = dctrack::reconstruct(events, geometry, opts);
  dctrack::writeRecoTracks(tracks, output);

  json manifest = {{"command", "reconstruct"},
                   {"input", input},
                   {"output", output},
                   {"config_hash", hashHex(cfg.hash())},
                   {"fit", opts.fit},
                   {"n_events", static_cast<long>(events.size())},
                   {"n_tracks", static_cast<long>(tracks.size())}};
  writeManifest(output + ".manifest.json", manifest);
  std::cout << "reconstructed " << tracks.size() << " tracks in " << events.size()
            << " events\n";
  return kExitOk;
}

int cmdEvaluate(const std::string& config_path, const std::string& input,
                const std::string& reco_path, const std::string& output, bool strict,
                int bins_pt, int bins_cos, bool with_binned) {
  auto cfg = loadConfig(config_path);
  const auto geometry = dctrack::Geometry::fromConfig(cfg);

  dctrack::ValidationReport report;
  const auto events = dctrack::readEvents(input, geometry, report, strict);
  for (const auto& issue : report.issues) std::cerr << "warning: " << issue << '\n';
  const auto tracks = dctrack::readRecoTracks(reco_path);

  const auto evaluation =
      dctrack::evaluate(events, tracks, dctrack::defaultPtEdges(bins_pt),
                        dctrack::defaultCosEdges(bins_cos));

  std::cout << dctrack::renderSummary(evaluation.total);
  if (!output.empty()) {
    std::ofstream out(output + ".metrics.txt", std::ios::binary);
    out << dctrack::renderMachine(evaluation.total);
    if (with_binned) {
      std::ofstream pt(output + ".by_pt.csv", std::ios::binary);
      pt << dctrack::renderBinned(evaluation.by_pt);
      std::ofstream cs(output + ".by_costheta.csv", std::ios::binary);
      cs << dctrack::renderBinned(evaluation.by_cos);
    }
  } else if (with_binned) {
    std::cout << '\n' << dctrack::renderBinned(evaluation.by_pt) << '\n'
              << dctrack::renderBinned(evaluation.by_cos);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drift-chamber tracking benchmark: simulation, reconstruction, metrics"};
  app.require_subcommand(1);

  std::string config_path, input, output, reco_path, category;
  long seed = -1, n_events = -1;
  bool no_fit = false, strict = false;
  int bins_pt = 9, bins_cos = 10;

  auto* gen = app.add_subcommand("generate", "Simulate events into a hit CSV");
  gen->add_option("--config", config_path, "Key-value config file");
  gen->add_option("--output", output, "Output hit CSV path")->required();
  gen->add_option("--seed", seed, "Override generate.seed");
  gen->add_option("--events", n_events, "Override generate.events");
  gen->add_option("--category", category, "single | conventional-two | close-by-two");

  auto* rec = app.add_subcommand("reconstruct", "Run the finder (and fitter) on a hit CSV");
  rec->add_option("--config", config_path, "Key-value config file");
  rec->add_option("--input", input, "Input hit CSV")->required();
  rec->add_option("--output", output, "Output reco CSV")->required();
  rec->add_flag("--no-fit", no_fit, "Keep finder seeds, skip the least-squares fit");
  rec->add_flag("--strict", strict, "Fail on any dataset validation finding");

  auto* eva = app.add_subcommand("evaluate", "Score a reco CSV against its hit CSV");
  eva->add_option("--config", config_path, "Key-value config file");
  eva->add_option("--input", input, "Truth hit CSV")->required();
  eva->add_option("--reco", reco_path, "Reco CSV")->required();
  eva->add_option("--output", output, "Report path prefix (default: stdout only)");
  eva->add_flag("--strict", strict, "Fail on any dataset validation finding");
  eva->add_option("--bins-pt", bins_pt, "Number of pT bins");
  eva->add_option("--bins-cos", bins_cos, "Number of cos(theta) bins");

  auto* rep = app.add_subcommand("report", "Evaluate and emit binned metric series");
  rep->add_option("--config", config_path, "Key-value config file");
  rep->add_option("--input", input, "Truth hit CSV")->required();
  rep->add_option("--reco", reco_path, "Reco CSV")->required();
  rep->add_option("--output", output, "Report path prefix (default: stdout)");
  rep->add_flag("--strict", strict, "Fail on any dataset validation finding");
  rep->add_option("--bins-pt", bins_pt, "Number of pT bins");
  rep->add_option("--bins-cos", bins_cos, "Number of cos(theta) bins");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmdGenerate(config_path, output, seed, n_events, category);
    if (rec->parsed()) return cmdReconstruct(config_path, input, output, no_fit, strict);
    if (eva->parsed())
      return cmdEvaluate(config_path, input, reco_path, output, strict, bins_pt, bins_cos,
                         false);
    if (rep->parsed())
      return cmdEvaluate(config_path, input, reco_path, output, strict, bins_pt, bins_cos,
                         true);
  } catch (const dctrack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dctrack::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitSchema;
  } catch (const dctrack::AlignmentError& e) {
    std::cerr << "alignment error: " << e.what() << '\n';
    return kExitAlignment;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
