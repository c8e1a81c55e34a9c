#pragma once

// Count files: one "label,count" row per projector (16 rows, any order),
// '#' comment lines. A "# label=<text>" comment names the measurement.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "pairstate/tomography.hpp"

namespace pairstate {

struct CountFile {
  // Ordered like the projection set passed to the reader.
  std::array<double, kNumProjectors> counts{};
  std::string label;  // empty when the file carries no label comment
  std::vector<std::string> comments;
};

CountFile read_count_file(std::istream& in, const ProjectionSet& set,
                          const std::string& source = "<stream>");
CountFile read_count_file(const std::string& path, const ProjectionSet& set);

// Writes rows in the order of `set`, preceded by the comments.
void write_count_file(std::ostream& out, const CountFile& file, const ProjectionSet& set);
void write_count_file(const std::string& path, const CountFile& file,
                      const ProjectionSet& set);

}  // namespace pairstate
