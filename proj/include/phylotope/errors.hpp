#pragma once

#include <stdexcept>
#include <string>

namespace phylotope {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (Newick, group specs, clade specs, JSON).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Inputs that are individually well-formed but do not fit together:
/// arity mismatches, unknown edges, socket/degree mismatches, cyclic plans.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A configured enumeration or size cap would be exceeded.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Empty feasible region of a linear program.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

} // namespace phylotope
