#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace schro {

// Closed catalogue of named functions available to config files.
std::function<double(double)> space_function(const std::string& name);
// Primitive of a space function when the catalogue knows it (used to expose
// nu alongside q for smooth potentials).
std::optional<std::function<double(double)>> space_function_primitive(const std::string& name);
std::function<double(double)> time_function(const std::string& name);

std::vector<std::string> space_function_names();
std::vector<std::string> time_function_names();

}  // namespace schro
