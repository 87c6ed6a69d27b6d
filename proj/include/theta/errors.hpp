#pragma once

#include <stdexcept>
#include <string>

namespace theta {

// Error categories, mapped to CLI exit codes: math failures -> 3, budget -> 4.
enum class errc {
    division_by_zero,
    context_mismatch,
    no_such_root,
    no_root,
    no_sqrt,
    degenerate_data,
    level2_unsupported,
    genericity_violation,
    scalar_extraction_failure,
    not_on_variety,
    inconsistent_blocks,
    isotropy_violation,
    not_torsion,
    not_spanning,
    budget_exceeded,
    bad_input,
};

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::division_by_zero: return "DivisionByZero";
        case errc::context_mismatch: return "ContextMismatch";
        case errc::no_such_root: return "NoSuchRoot";
        case errc::no_root: return "NoRoot";
        case errc::no_sqrt: return "NoSqrt";
        case errc::degenerate_data: return "DegenerateData";
        case errc::level2_unsupported: return "Level2Unsupported";
        case errc::genericity_violation: return "GenericityViolation";
        case errc::scalar_extraction_failure: return "ScalarExtractionFailure";
        case errc::not_on_variety: return "NotOnVariety";
        case errc::inconsistent_blocks: return "InconsistentBlocks";
        case errc::isotropy_violation: return "IsotropyViolation";
        case errc::not_torsion: return "NotTorsion";
        case errc::not_spanning: return "NotSpanning";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::bad_input: return "BadInput";
    }
    return "Unknown";
}

[[noreturn]] inline void fail(errc c, const std::string& msg) {
    throw Error(c, std::string(errc_name(c)) + ": " + msg);
}

}  // namespace theta
