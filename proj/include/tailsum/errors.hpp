#pragma once

#include <stdexcept>
#include <string>

namespace tailsum {

// Argument outside its documented domain (bad parameter, u outside (0,1], ...).
class domain_error : public std::invalid_argument {
public:
    explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Request beyond what the implementation supports (derivative order, dimension, grid size).
class capability_error : public std::runtime_error {
public:
    explicit capability_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime (bracket growth exhausted, degenerate conditioning, ...).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tailsum
