#pragma once

#include <iosfwd>
#include <vector>

#include "skillprobe/simulator/profile.hpp"

namespace skillprobe {

// Serves simulated skills over the adapter wire protocol: one request line
// in, one reply line out. "open" picks the profile whose invocation name
// matches (after normalization); each profile keeps its own state for the
// life of the server. Returns after a "close" request or end of input.
//
// A one-shot skill answers "open" with {"type":"closed","text":...}.
void serve_profiles(const std::vector<SimProfile>& profiles, std::istream& in, std::ostream& out);

}  // namespace skillprobe
