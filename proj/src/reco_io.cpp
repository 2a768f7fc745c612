#include "dctrack/reco_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dctrack/dataset_io.hpp"
#include "dctrack/errors.hpp"

namespace dctrack {

namespace {

const char* kHeader =
    "eventIndex,recoTrackId,dR,phi0,kappa,dZ,tanLambda,chi2,ndf,converged,hits";

std::string formatHits(const std::vector<WireId>& hits) {
  std::string s;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(hits[i].layer) + ':' + std::to_string(hits[i].cell);
  }
  return s;
}

std::vector<WireId> parseHits(const std::string& field, long line_no) {
  std::vector<WireId> hits;
  if (field.empty()) return hits;
  std::stringstream ss(field);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw SchemaError("reco csv line " + std::to_string(line_no) +
                        ": malformed hit token '" + tok + "'");
    try {
      hits.push_back({std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1))});
    } catch (const std::exception&) {
      throw SchemaError("reco csv line " + std::to_string(line_no) +
                        ": malformed hit token '" + tok + "'");
    }
  }
  return hits;
}

}  // namespace

long writeRecoTracks(const std::vector<RecoTrack>& tracks, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot open for writing: " + path);

  std::vector<const RecoTrack*> sorted;
  sorted.reserve(tracks.size());
  for (const auto& t : tracks) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(), [](const RecoTrack* a, const RecoTrack* b) {
    if (a->event_id != b->event_id) return a->event_id < b->event_id;
    return a->reco_id < b->reco_id;
  });

  out << kHeader << '\n';
  for (const RecoTrack* t : sorted) {
    out << t->event_id << ',' << t->reco_id << ',' << formatValue(t->params.d_r) << ','
        << formatValue(t->params.phi0) << ',' << formatValue(t->params.kappa) << ','
        << formatValue(t->params.d_z) << ',' << formatValue(t->params.tan_lambda) << ','
        << formatValue(t->chi2) << ',' << t->ndf << ',' << (t->converged ? 1 : 0) << ','
        << formatHits(t->hits) << '\n';
  }
  if (!out) throw SchemaError("write failed: " + path);
  return static_cast<long>(sorted.size());
}

std::vector<RecoTrack> readRecoTracks(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty reco csv: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw SchemaError("reco csv header mismatch in " + path + ": got '" + line + "'");

  std::vector<RecoTrack> tracks;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (line.back() == ',') fields.push_back("");  // empty trailing hits field
    if (fields.size() != 11)
      throw SchemaError("reco csv line " + std::to_string(line_no) + ": expected 11 fields, got " +
                        std::to_string(fields.size()));
    RecoTrack t;
    try {
      t.event_id = std::stol(fields[0]);
      t.reco_id = std::stoi(fields[1]);
      t.params.d_r = std::stod(fields[2]);
      t.params.phi0 = std::stod(fields[3]);
      t.params.kappa = std::stod(fields[4]);
      t.params.d_z = std::stod(fields[5]);
      t.params.tan_lambda = std::stod(fields[6]);
      t.chi2 = std::stod(fields[7]);
      t.ndf = std::stoi(fields[8]);
      t.converged = std::stoi(fields[9]) != 0;
    } catch (const std::exception&) {
      throw SchemaError("reco csv line " + std::to_string(line_no) + ": malformed numeric field");
    }
    t.hits = parseHits(fields[10], line_no);
    tracks.push_back(std::move(t));
  }
  return tracks;
}

}  // namespace dctrack
