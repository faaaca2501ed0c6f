#ifndef MEASURELAB_IO_HPP
#define MEASURELAB_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "measurelab/fourier.hpp"
#include "measurelab/measure.hpp"
#include "measurelab/support.hpp"

namespace measurelab::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that reads back to the same double (at most 17
/// significant digits).
std::string format_double(double v);

Json measure_to_json(const FiniteMeasure& mu);
FiniteMeasure measure_from_json(const Json& j);

Json support_to_json(const SupportSet& s);
SupportSet support_from_json(const Json& j);

Json cone_to_json(const ConvexCone& c);

/// Grid schema of a density with "space": "frequency".
Json spectrum_to_json(const SpectrumGrid& s);
SpectrumGrid spectrum_from_json(const Json& j);

/// One row per node: x_1..x_n, re, im.
std::string grid_csv(const UniformGrid& grid, const std::vector<Complex>& values);
std::string points_csv(const std::vector<RealVector>& points, const std::vector<Complex>& values,
                       const std::vector<std::string>& coord_names);

/// Serializes with 17-significant-digit floats.
std::string dump(const Json& j, int indent = -1);

Json load_json_file(const std::string& path);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace measurelab::io

#endif
