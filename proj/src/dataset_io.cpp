#include "dctrack/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "dctrack/errors.hpp"

namespace dctrack {

namespace {

const std::vector<std::string> kColumns = {
    "eventIndex",   "middleX",       "middleY",     "layer",
    "slayer",       "locallayer",    "rawDriftDist", "rawDriftDistErr",
    "isSignal",     "trackIndex",    "scaledFltLen", "lrAmbig",
    "initialMomX",  "initialMomY",   "initialMomZ", "initialPosX",
    "initialPosY",  "initialPosZ",   "charge"};

std::vector<std::string> splitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct RawRow {
  long event_index;
  Hit hit;
  int track_index;
  double mom[3], pos[3];
  int charge;
};

}  // namespace

const std::vector<std::string>& csvColumns() { return kColumns; }

std::string formatValue(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

long writeEvents(const std::vector<Event>& events, std::ostream& out) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) out << ',';
    out << kColumns[i];
  }
  out << '\n';

  long rows = 0;
  for (const Event& event : events) {
    std::vector<std::size_t> order(event.hits.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return event.hits[a].wire < event.hits[b].wire;
    });

    for (const std::size_t i : order) {
      const Hit& h = event.hits[i];
      const TruthTrack* track = nullptr;
      if (h.track_index > 0) {
        for (const auto& t : event.truth)
          if (t.track_index == h.track_index) {
            track = &t;
            break;
          }
      }
      out << event.event_id << ',' << formatValue(h.middle_x) << ','
          << formatValue(h.middle_y) << ',' << h.wire.layer << ','
          << h.slayer << ',' << h.locallayer << ','
          << formatValue(h.raw_drift_dist) << ',' << formatValue(h.raw_drift_dist_err)
          << ',' << h.is_signal << ',' << h.track_index << ','
          << formatValue(h.scaled_flt_len) << ',' << h.lr_ambig << ',';
      if (track) {
        out << formatValue(track->state.momentum.x) << ','
            << formatValue(track->state.momentum.y) << ','
            << formatValue(track->state.momentum.z) << ','
            << formatValue(track->state.position.x) << ','
            << formatValue(track->state.position.y) << ','
            << formatValue(track->state.position.z) << ',' << track->state.charge;
      } else {
        out << "0,0,0,0,0,0,0";
      }
      out << '\n';
      ++rows;
    }
  }
  return rows;
}

long writeEvents(const std::vector<Event>& events, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot open for writing: " + path);
  const long rows = writeEvents(events, out);
  if (!out) throw SchemaError("write failure: " + path);
  return rows;
}

std::vector<Event> readEvents(const std::string& path, const Geometry& geometry,
                              ValidationReport& report, bool strict) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open dataset: " + path);

  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty file: " + path);
  const auto header = splitCsv(line);
  std::map<std::string, int> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = static_cast<int>(i);
  for (const auto& name : kColumns)
    if (!col.count(name))
      throw SchemaError(path + ": missing required column '" + name + "'");

  auto note = [&](const std::string& msg) {
    if (strict) throw SchemaError(path + ": " + msg);
    report.issues.push_back(msg);
  };

  std::vector<RawRow> rows;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = splitCsv(line);
    if (cells.size() < header.size()) {
      note("line " + std::to_string(lineno) + ": expected " +
           std::to_string(header.size()) + " cells, got " +
           std::to_string(cells.size()));
      continue;
    }
    RawRow r{};
    try {
      auto num = [&](const char* name) { return std::stod(cells[col[name]]); };
      auto integer = [&](const char* name) { return std::stol(cells[col[name]]); };
      r.event_index = integer("eventIndex");
      r.hit.middle_x = num("middleX");
      r.hit.middle_y = num("middleY");
      r.hit.wire.layer = static_cast<int>(integer("layer"));
      const int slayer = static_cast<int>(integer("slayer"));
      const int locallayer = static_cast<int>(integer("locallayer"));
      r.hit.raw_drift_dist = num("rawDriftDist");
      r.hit.raw_drift_dist_err = num("rawDriftDistErr");
      r.hit.is_signal = static_cast<int>(integer("isSignal"));
      r.hit.track_index = static_cast<int>(integer("trackIndex"));
      r.hit.scaled_flt_len = num("scaledFltLen");
      r.hit.lr_ambig = static_cast<int>(integer("lrAmbig"));
      for (int k = 0; k < 3; ++k) {
        r.mom[k] = num(k == 0 ? "initialMomX" : k == 1 ? "initialMomY" : "initialMomZ");
        r.pos[k] = num(k == 0 ? "initialPosX" : k == 1 ? "initialPosY" : "initialPosZ");
      }
      r.charge = static_cast<int>(integer("charge"));

      if (r.hit.wire.layer < 0 || r.hit.wire.layer >= geometry.nLayers()) {
        note("line " + std::to_string(lineno) + ": layer out of range: " +
             std::to_string(r.hit.wire.layer));
        continue;
      }
      const LayerSpec& spec = geometry.layerSpec(r.hit.wire.layer);
      if (slayer != spec.superlayer)
        note("line " + std::to_string(lineno) + ": slayer inconsistent with layer");
      if (locallayer != spec.local_layer)
        note("line " + std::to_string(lineno) + ": locallayer inconsistent with layer");
      r.hit.slayer = slayer;
      r.hit.locallayer = locallayer;
      if (r.hit.is_signal != 0 && r.hit.is_signal != 1)
        note("line " + std::to_string(lineno) + ": isSignal not in {0,1}");
      if ((r.hit.is_signal == 1) != (r.hit.track_index > 0))
        note("line " + std::to_string(lineno) + ": isSignal/trackIndex mismatch");
      if (r.hit.is_signal == 1 && r.charge != 1 && r.charge != -1)
        note("line " + std::to_string(lineno) + ": signal row charge not +-1");
      if (r.hit.raw_drift_dist < 0 ||
          r.hit.raw_drift_dist >= geometry.halfCellPitch(r.hit.wire.layer) + 1e-9)
        note("line " + std::to_string(lineno) + ": rawDriftDist out of cell");
      if (r.hit.lr_ambig != 1 && r.hit.lr_ambig != -1)
        note("line " + std::to_string(lineno) + ": lrAmbig not +-1");

      r.hit.wire.cell =
          geometry.cellFromMidpoint(r.hit.wire.layer, r.hit.middle_x, r.hit.middle_y);
    } catch (const std::exception& e) {
      note("line " + std::to_string(lineno) + ": unparsable cell (" + e.what() + ")");
      continue;
    }
    rows.push_back(r);
    ++report.rows_read;
  }

  // Group rows into events, canonical (layer, cell) hit order.
  std::map<long, std::vector<RawRow>> by_event;
  for (auto& r : rows) by_event[r.event_index].push_back(r);

  std::vector<Event> events;
  for (auto& [event_id, event_rows] : by_event) {
    std::sort(event_rows.begin(), event_rows.end(),
              [](const RawRow& a, const RawRow& b) { return a.hit.wire < b.hit.wire; });
    Event event;
    event.event_id = event_id;
    std::map<int, TruthTrack> tracks;
    for (const auto& r : event_rows) {
      const std::size_t hit_idx = event.hits.size();
      event.hits.push_back(r.hit);
      if (r.hit.track_index <= 0) continue;
      auto [it, inserted] = tracks.try_emplace(r.hit.track_index);
      TruthTrack& t = it->second;
      if (inserted) {
        t.track_index = r.hit.track_index;
        t.state.momentum = {r.mom[0], r.mom[1], r.mom[2]};
        t.state.position = {r.pos[0], r.pos[1], r.pos[2]};
        t.state.charge = r.charge;
      } else if (t.state.momentum.x != r.mom[0] || t.state.momentum.y != r.mom[1] ||
                 t.state.momentum.z != r.mom[2] || t.state.charge != r.charge) {
        note("event " + std::to_string(event_id) + ": trackIndex " +
             std::to_string(r.hit.track_index) + " has inconsistent track labels");
      }
      t.hit_indices.push_back(hit_idx);
    }
    for (auto& [idx, t] : tracks) event.truth.push_back(std::move(t));
    events.push_back(std::move(event));
  }
  return events;
}

}  // namespace dctrack
