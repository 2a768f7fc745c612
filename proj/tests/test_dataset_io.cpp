#include <cstdio>
#include <fstream>
#include <sstream>

#include "dctrack/dataset_io.hpp"
#include "dctrack/errors.hpp"
#include "dctrack/simulator.hpp"
#include "doctest.h"

using namespace dctrack;

namespace {

const Geometry& geom() {
  static const Geometry g = Geometry::standard();
  return g;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::vector<Event> sampleEvents(int n, double noise = 5.0) {
  SimulationConfig cfg;
  cfg.noise_rate = noise;
  cfg.n_events = n;
  return generateEvents(geom(), cfg);
}

}  // namespace

TEST_CASE("schema columns are exact") {
  const std::vector<std::string> expected = {
      "eventIndex",   "middleX",       "middleY",     "layer",
      "slayer",       "locallayer",    "rawDriftDist", "rawDriftDistErr",
      "isSignal",     "trackIndex",    "scaledFltLen", "lrAmbig",
      "initialMomX",  "initialMomY",   "initialMomZ", "initialPosX",
      "initialPosY",  "initialPosZ",   "charge"};
  CHECK(csvColumns() == expected);
}

TEST_CASE("write -> read -> write is byte-identical") {
  const auto events = sampleEvents(40);
  TempFile f1("test_io_a.csv"), f2("test_io_b.csv");
  const long rows1 = writeEvents(events, f1.path);
  CHECK(rows1 > 0);

  ValidationReport report;
  const auto back = readEvents(f1.path, geom(), report, true);
  CHECK(report.ok());
  CHECK(report.rows_read == rows1);
  CHECK(back.size() == events.size());

  const long rows2 = writeEvents(back, f2.path);
  CHECK(rows2 == rows1);
  CHECK(slurp(f1.path) == slurp(f2.path));
}

TEST_CASE("read rebuilds truth tracks faithfully") {
  const auto events = sampleEvents(10);
  TempFile f("test_io_truth.csv");
  writeEvents(events, f.path);
  ValidationReport report;
  const auto back = readEvents(f.path, geom(), report, true);
  REQUIRE(back.size() == events.size());
  for (std::size_t e = 0; e < events.size(); ++e) {
    CHECK(back[e].event_id == events[e].event_id);
    CHECK(back[e].hits.size() == events[e].hits.size());
    REQUIRE(back[e].truth.size() == events[e].truth.size());
    for (std::size_t t = 0; t < events[e].truth.size(); ++t) {
      const auto& orig = events[e].truth[t];
      const auto& got = back[e].truth[t];
      CHECK(got.track_index == orig.track_index);
      CHECK(got.state.charge == orig.state.charge);
      CHECK(got.pt() == doctest::Approx(orig.pt()).epsilon(1e-8));
      CHECK(got.cosTheta() == doctest::Approx(orig.cosTheta()).epsilon(1e-8));
      CHECK(got.hit_indices.size() == orig.hit_indices.size());
      // Hit sets coincide as wire sets.
      for (const std::size_t i : got.hit_indices)
        CHECK(back[e].hits[i].track_index == orig.track_index);
    }
  }
}

TEST_CASE("missing columns are fatal even without strict mode") {
  TempFile f("test_io_missing.csv");
  {
    std::ofstream out(f.path);
    out << "eventIndex,middleX\n0,1.0\n";
  }
  ValidationReport report;
  CHECK_THROWS_AS(readEvents(f.path, geom(), report, false), SchemaError);
}

TEST_CASE("validation findings: lenient mode collects, strict mode throws") {
  const auto events = sampleEvents(2, 0.0);
  TempFile f("test_io_tamper.csv");
  writeEvents(events, f.path);

  // Tamper: flip one isSignal to an invalid value.
  std::string text = slurp(f.path);
  std::istringstream in(text);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  auto cells = [&] {
    std::vector<std::string> c;
    std::stringstream ss(row);
    std::string tok;
    while (std::getline(ss, tok, ',')) c.push_back(tok);
    return c;
  }();
  cells[8] = "7";  // isSignal column
  std::string tampered = header + "\n";
  for (std::size_t i = 0; i < cells.size(); ++i)
    tampered += (i ? "," : "") + cells[i];
  tampered += "\n";
  {
    std::ofstream out(f.path, std::ios::binary);
    out << tampered;
  }

  ValidationReport lenient;
  const auto back = readEvents(f.path, geom(), lenient, false);
  CHECK(!lenient.ok());
  CHECK(back.size() == 1);
  ValidationReport strict;
  CHECK_THROWS_AS(readEvents(f.path, geom(), strict, true), SchemaError);
}

TEST_CASE("rows come out in (event, layer, cell) order") {
  const auto events = sampleEvents(5);
  TempFile f("test_io_order.csv");
  writeEvents(events, f.path);
  std::ifstream in(f.path);
  std::string line;
  std::getline(in, line);  // header
  long prev_event = -1;
  int prev_layer = -1;
  double prev_mid_phi = 0;
  (void)prev_mid_phi;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cells;
    while (std::getline(ss, tok, ',')) cells.push_back(tok);
    const long ev = std::stol(cells[0]);
    const int layer = std::stoi(cells[3]);
    CHECK(ev >= prev_event);
    if (ev != prev_event) prev_layer = -1;
    CHECK(layer >= prev_layer);
    prev_event = ev;
    prev_layer = layer;
  }
}

TEST_CASE("formatValue uses nine significant digits") {
  CHECK(formatValue(0.0) == "0");
  CHECK(formatValue(1.0) == "1");
  CHECK(formatValue(0.123456789123) == "0.123456789");
  CHECK(formatValue(-2.5) == "-2.5");
}

TEST_CASE("unreadable and empty files raise schema errors") {
  ValidationReport report;
  CHECK_THROWS_AS(readEvents("/nonexistent/file.csv", geom(), report, false), SchemaError);
  TempFile f("test_io_empty.csv");
  { std::ofstream out(f.path); }
  CHECK_THROWS_AS(readEvents(f.path, geom(), report, false), SchemaError);
}
