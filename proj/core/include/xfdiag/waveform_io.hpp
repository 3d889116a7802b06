#pragma once

#include <string>
#include <vector>

#include "xfdiag/simgen.hpp"

namespace xfdiag {

// One record as decimal text ("t ia ib ic" per line) plus a JSON sidecar at
// <path>.json carrying the spec and timing metadata.
void write_record_text(const WaveformRecord& rec, const std::string& path);
WaveformRecord read_record_text(const std::string& path);

// Packed container: magic "XFWV", u32 version, u64 record count, then per
// record a u32-length-prefixed JSON header followed by u64 sample count and
// the three phase sample blocks as raw doubles.
void write_container(const std::vector<WaveformRecord>& records, const std::string& path);
std::vector<WaveformRecord> read_container(const std::string& path);

void write_manifest_file(const DatasetManifest& manifest, const std::string& path);
DatasetManifest read_manifest_file(const std::string& path);

}  // namespace xfdiag
