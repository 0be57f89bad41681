#pragma once

// Command layer behind the wrapctl executable. Every command returns its
// rendered output and exit code instead of printing, so tests drive the
// same code paths as the binary.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wrap/doctree.hpp"
#include "wrap/elog.hpp"
#include "wrap/error.hpp"
#include "wrap/hel.hpp"
#include "wrap/object.hpp"
#include "wrap/rpn.hpp"

namespace wrap::cli {

enum Exit : int { ok = 0, wrapper_error = 1, document_error = 2, divergence = 3, usage_error = 64 };

enum class Lang { rpn, hel, vhel, elog };

/// By extension only: .rpn, .hel, .vhel, .elog.
std::optional<Lang> detect_language(std::string_view path);
std::string_view to_string(Lang lang);

enum class OutMode { json, atoms, dot };

struct Outcome {
    int code = ok;
    std::string out;
    std::string err;
};

/// A parsed wrapper file. `stmt` holds rpn, vhel and desugared hel
/// statements; `program` holds elog.
struct Wrapper {
    std::string path;
    std::string text;
    Lang lang = Lang::rpn;
    rpn::Statement stmt;
    hel::HelStatement hel;
    elog::Program program;
};

/// Raised by the loaders; `code` is the exit code the command reports.
struct Failure {
    int code;
    std::string message;
};

/// `path:line:col: Kind: message` for an error raised while parsing `text`.
std::string located(const std::string& path, std::string_view text, const Error& e);

Wrapper load_wrapper(const std::string& path);
doc::DocTree load_document(const std::string& path);

struct EvalSettings {
    bool strict = true;
    bool cut = false;
    std::vector<std::string>* warnings = nullptr;
};

/// Complex object of a wrapper: RPN semantics for rpn, the variable-free
/// semantics for hel and vhel, and the `@schema` mapping for elog.
ComplexObject evaluate(const Wrapper& w, const doc::DocTree& t, const EvalSettings& settings = {});

/// The Elog program a wrapper stands for: elog as is, rpn and hel/vhel via
/// their translations.
elog::Program as_program(const Wrapper& w);

struct RunConfig {
    std::string wrapper;
    std::string document;
    // Defaults to json, or atoms for elog wrappers.
    std::optional<OutMode> out{};
    bool strict = true;
    bool cut = false;
};

Outcome cmd_run(const RunConfig& config);

enum class Target { vhel, elog };

Outcome cmd_translate(const std::string& wrapper, Target target);

/// Parses and validates without a document; prints the output type.
Outcome cmd_check(const std::string& wrapper);

struct DiffConfig {
    std::string a;
    std::string b;
    std::optional<std::string> document{};
    std::size_t generate = 0;
    std::uint64_t seed = 0;
    bool strict = true;
    std::size_t max_nodes = 30;
};

/// Exit 0 with "no divergence", or 3 with a report of the first divergence
/// (shrunk when documents are generated).
Outcome cmd_diff(const DiffConfig& config);

/// b1 .. bm chained below the root, bm with n leaves labelled l.
doc::DocTree quadratic_tree(std::size_t m, std::size_t n);
/// p(X0,X) :- dom(_,X0), subelem["(^l)*.l"](X0,X).
elog::Program quadratic_program();

struct BenchResult {
    std::size_t atoms = 0;
    double seconds = 0;
};

BenchResult bench_quadratic(std::size_t m, std::size_t n);
Outcome cmd_bench(std::size_t m, std::size_t n);

/// Tags and strings mentioned by a wrapper, used as the alphabet for
/// generated documents.
struct Alphabet {
    std::set<std::string> tags;
    std::set<std::string> texts;
};

Alphabet alphabet_of(const Wrapper& w);

} // namespace wrap::cli
