#include "schro/functions.hpp"

#include <cmath>
#include <numbers>

#include "schro/errors.hpp"

namespace schro {

namespace {
constexpr double pi = std::numbers::pi;
}

std::function<double(double)> space_function(const std::string& name) {
    if (name == "zero") return [](double) { return 0.0; };
    if (name == "one") return [](double) { return 1.0; };
    if (name == "sin_pi") return [](double x) { return std::sin(pi * x); };
    if (name == "sqrt2_sin_pi")
        return [](double x) { return std::sqrt(2.0) * std::sin(pi * x); };
    if (name == "sin_2pi") return [](double x) { return std::sin(2.0 * pi * x); };
    if (name == "x_one_minus_x") return [](double x) { return x * (1.0 - x); };
    if (name == "one_plus_sin_sq")
        return [](double x) {
            const double s = std::sin(pi * x);
            return 1.0 + s * s;
        };
    throw config_error("unknown space function: " + name);
}

std::optional<std::function<double(double)>> space_function_primitive(const std::string& name) {
    if (name == "zero") return [](double) { return 0.0; };
    if (name == "one") return [](double x) { return x; };
    if (name == "sin_pi") return [](double x) { return (1.0 - std::cos(pi * x)) / pi; };
    if (name == "sqrt2_sin_pi")
        return [](double x) { return std::sqrt(2.0) * (1.0 - std::cos(pi * x)) / pi; };
    if (name == "sin_2pi")
        return [](double x) { return (1.0 - std::cos(2.0 * pi * x)) / (2.0 * pi); };
    if (name == "x_one_minus_x")
        return [](double x) { return x * x / 2.0 - x * x * x / 3.0; };
    if (name == "one_plus_sin_sq")
        return [](double x) { return 1.5 * x - std::sin(2.0 * pi * x) / (4.0 * pi); };
    return std::nullopt;
}

std::function<double(double)> time_function(const std::string& name) {
    if (name == "one") return [](double) { return 1.0; };
    if (name == "one_plus_t") return [](double t) { return 1.0 + t; };
    if (name == "two_plus_cos_two_pi")
        return [](double t) { return 2.0 + std::cos(2.0 * pi * t); };
    throw config_error("unknown time function: " + name);
}

std::vector<std::string> space_function_names() {
    return {"zero", "one", "sin_pi", "sqrt2_sin_pi", "sin_2pi", "x_one_minus_x",
            "one_plus_sin_sq"};
}

std::vector<std::string> time_function_names() {
    return {"one", "one_plus_t", "two_plus_cos_two_pi"};
}

}  // namespace schro
