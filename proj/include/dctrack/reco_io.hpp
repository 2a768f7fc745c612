#pragma once

#include <string>
#include <vector>

#include "dctrack/helix.hpp"

namespace dctrack {

/// One reconstructed track as stored in the reco CSV.
struct RecoTrack {
  long event_id = 0;
  int reco_id = 0;
  HelixParams params;
  double chi2 = 0;
  int ndf = 0;
  bool converged = false;
  std::vector<WireId> hits;
};

long writeRecoTracks(const std::vector<RecoTrack>& tracks, const std::string& path);
std::vector<RecoTrack> readRecoTracks(const std::string& path);

}  // namespace dctrack
