#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wrap {

enum class ErrorKind {
    malformed_input,
    syntax_error,
    unsafe_rule,
    unknown_predicate,
    not_stratified,
    has_rule_ranges,
    aux_cycle,
    schema_mismatch,
    cycle_detected,
    no_word_of_length,
    multiple_words,
    var_used_twice,
    var_unbound,
    prefix_mismatch,
    no_variable,
    single_value_violation,
    not_fragment,
    unsupported,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this one exception type; `kind`
// identifies the failure and `offset` is a byte offset into the parsed text
// when one applies (npos otherwise).
class Error : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    Error(ErrorKind kind, const std::string& message, std::size_t offset = npos)
        : std::runtime_error(format(kind, message, offset)), kind_(kind), offset_(offset), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& message() const noexcept { return message_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    static std::string format(ErrorKind kind, const std::string& message, std::size_t offset);

    ErrorKind kind_;
    std::size_t offset_;
    std::string message_;
};

} // namespace wrap
