#ifndef GT_ERRORS_HPP
#define GT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gt {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside its mathematical domain (probabilities, counts).
struct DomainError : Error {
    using Error::Error;
};

// Plan / preset construction and validation failures.
struct ValidationError : Error {
    using Error::Error;
};

struct GroupSizeExceedsPopulation : ValidationError {
    explicit GroupSizeExceedsPopulation(int stage_index)
        : ValidationError("group size exceeds population at stage " + std::to_string(stage_index)),
          stage(stage_index) {}
    int stage;  // 1-based
};

struct NonPositiveParameter : ValidationError {
    NonPositiveParameter(int stage_index, char field_name)
        : ValidationError(std::string("non-positive '") + field_name + "' at stage " +
                          std::to_string(stage_index)),
          stage(stage_index),
          field(field_name) {}
    int stage;   // 1-based
    char field;  // 'r' or 's'
};

struct ArityMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct RValueRequired : ValidationError {
    RValueRequired() : ValidationError("preset requires an explicit joint-test count") {}
};

struct RValueForbidden : ValidationError {
    RValueForbidden() : ValidationError("preset fixes its joint-test count; none may be supplied") {}
};

struct WeightArityMismatch : ValidationError {
    WeightArityMismatch(std::size_t got, std::size_t want)
        : ValidationError("duration weights arity " + std::to_string(got) + ", expected " +
                          std::to_string(want)) {}
};

// A fixture assignment does not cover the realized suspect set.
struct AssignmentMismatch : Error {
    explicit AssignmentMismatch(int stage_index, const std::string& what)
        : Error("stage " + std::to_string(stage_index) + ": " + what), stage(stage_index) {}
    int stage;  // 1-based
};

struct BudgetExceeded : Error {
    using Error::Error;
};

struct EmptyOutcomes : Error {
    EmptyOutcomes() : Error("empty outcome list") {}
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct ZeroExpected : Error {
    ZeroExpected() : Error("expected series contains a zero entry") {}
};

struct UnsortedGrid : Error {
    UnsortedGrid() : Error("probability grid must be sorted ascending") {}
};

struct SchemaMismatch : Error {
    using Error::Error;
};

}  // namespace gt

#endif  // GT_ERRORS_HPP
