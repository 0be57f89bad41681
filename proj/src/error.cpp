#include "wrap/error.hpp"

namespace wrap {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::malformed_input: return "MalformedInput";
    case ErrorKind::syntax_error: return "SyntaxError";
    case ErrorKind::unsafe_rule: return "UnsafeRule";
    case ErrorKind::unknown_predicate: return "UnknownPredicate";
    case ErrorKind::not_stratified: return "NotStratified";
    case ErrorKind::has_rule_ranges: return "HasRuleRanges";
    case ErrorKind::aux_cycle: return "AuxCycle";
    case ErrorKind::schema_mismatch: return "SchemaMismatch";
    case ErrorKind::cycle_detected: return "CycleDetected";
    case ErrorKind::no_word_of_length: return "NoWordOfLength";
    case ErrorKind::multiple_words: return "MultipleWords";
    case ErrorKind::var_used_twice: return "VarUsedTwice";
    case ErrorKind::var_unbound: return "VarUnbound";
    case ErrorKind::prefix_mismatch: return "PrefixMismatch";
    case ErrorKind::no_variable: return "NoVariable";
    case ErrorKind::single_value_violation: return "SingleValueViolation";
    case ErrorKind::not_fragment: return "NotFragment";
    case ErrorKind::unsupported: return "Unsupported";
    }
    return "Error";
}

std::string Error::format(ErrorKind kind, const std::string& message, std::size_t offset) {
    std::string out(to_string(kind));
    if (offset != npos)
        out += " at offset " + std::to_string(offset);
    out += ": ";
    out += message;
    return out;
}

} // namespace wrap
