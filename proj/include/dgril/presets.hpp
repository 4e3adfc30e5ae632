#ifndef DGRIL_PRESETS_HPP
#define DGRIL_PRESETS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "dgril/complex.hpp"
#include "dgril/dataset.hpp"

namespace dgril {

enum class FiltrationSource { degree, lowerstar_attributes, file };

FiltrationSource parse_filtration_source(const std::string& name);
std::string to_string(FiltrationSource source);

/// Per-vertex (x, y) for the no-learning presets:
///   degree               -> (degree, eccentricity within the component)
///   lowerstar_attributes -> first two feature columns (the first one twice
///                           when there is only one)
std::vector<double> preset_vertex_values(const GraphRecord& graph, FiltrationSource source);

/// One line per graph, 2m comma-separated vertex values x_0,y_0,x_1,y_1,...
std::vector<std::vector<double>> read_vertex_value_file(const std::filesystem::path& path);

/// Lower-star extension of vertex values followed by per-axis rescaling to
/// [0,1].
std::vector<double> normalized_bifiltration(const SimplicialComplex& complex,
                                            const std::vector<double>& vertex_values);

}  // namespace dgril

#endif  // DGRIL_PRESETS_HPP
