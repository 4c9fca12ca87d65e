#pragma once

#include <stdexcept>
#include <string>

namespace overlapforge {

// The construction/certification routines distinguish failure causes so the
// CLI can map them to stable exit codes.

// The requested quantity needs a deeper convergent table.
struct needs_more_digits_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested certificate needs more construction rounds.
struct needs_more_rounds_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured resource cap (enumeration depth, bit budget) was exceeded.
struct resource_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An internal invariant that should hold by construction failed.
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

// A persisted state/certificate failed its exact replay.
struct integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An epsilon specification cannot answer the query (e.g. table without tail).
struct incomplete_spec_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A file could not be parsed as the expected schema.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace overlapforge
