#pragma once

#include <cstdint>
#include <string>

#include "qwalk/statespace.hpp"

namespace qwalk {

// Resumable evolution state. `step` counts applied conditional shifts;
// `fingerprint` identifies the run settings the state was produced under.
struct Snapshot {
    std::int64_t step = 0;
    std::string fingerprint;
    AmplitudeTable table;
};

// Binary little-endian layout:
//   "QWSNAP01" | int32 N, M, d | int64 step | float64 K | uint32 len + fingerprint
//   | uint64 count | count x (int32 j (1-based), uint64 rank, float64 re, float64 im)
// Entries are written in (j, rank) order; doubles are stored bit-exact.
void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

}  // namespace qwalk
