// Small deterministic text-output helpers shared by the CSV writers.
#pragma once

#include <fstream>
#include <string>

namespace envpde {

// Round-trip-exact decimal rendering (printf %.17g, C locale semantics).
std::string fmt17(double v);

// Open for writing/reading; throws IoError with the path on failure.
std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

}  // namespace envpde
