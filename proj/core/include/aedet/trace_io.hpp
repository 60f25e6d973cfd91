#pragma once

#include <iosfwd>
#include <string>

#include "aedet/synthgen.hpp"

namespace aedet {

// CSV trace format:
//   #dim=<d>
//   node_id,timestamp_index,label,valid,v0,...,v{d-1}
// Floats use shortest round-trip-exact decimal representation.
void write_trace_csv(const LabeledTrace& trace, std::ostream& out);
void write_trace_csv(const LabeledTrace& trace, const std::string& path);

LabeledTrace read_trace_csv(std::istream& in);
LabeledTrace read_trace_csv(const std::string& path);

// Round-trip-exact double formatting shared by all CSV writers.
std::string format_double(double v);

}  // namespace aedet
