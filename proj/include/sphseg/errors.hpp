#pragma once

#include <stdexcept>
#include <string>

namespace sphseg {

// Parameter outside its documented domain. CLI maps this to a usage error.
class invalid_parameter : public std::invalid_argument {
public:
    explicit invalid_parameter(const std::string& msg) : std::invalid_argument(msg) {}
};

// Input data malformed or inconsistent with the requested operation
// (size mismatches, non-finite samples, incompatible grids).
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& msg) : std::invalid_argument(msg) {}
};

// File could not be read, written, or parsed.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical guarantee was violated at run time (round-trip drift,
// imaginary residue above tolerance, ...).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sphseg
