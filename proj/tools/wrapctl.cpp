#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>

#include "wrap/cli.hpp"

namespace {

using namespace wrap::cli;

bool use_color() {
    const char* env = std::getenv("WRAPCTL_COLOR");
    if (env && std::string(env) == "0")
        return false;
    return isatty(STDOUT_FILENO) && isatty(STDERR_FILENO);
}

int emit(const Outcome& o, bool color) {
    auto paint = [&](const std::string& s, const char* code) {
        return color ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
    };
    std::string out = o.out;
    if (o.code == divergence && !out.empty())
        out = paint(out.substr(0, out.find('\n')), "31") + out.substr(out.find('\n'));
    else if (out.rfind("no divergence", 0) == 0)
        out = paint(out.substr(0, out.size() - 1), "32") + "\n";
    std::cout << out;
    if (!o.err.empty())
        std::cerr << (o.code == ok ? o.err : paint("error: ", "1;31") + o.err);
    return o.code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Run, translate, check, compare and benchmark tree wrappers"};
    app.require_subcommand(1);
    bool color = use_color();

    RunConfig run;
    auto* run_cmd = app.add_subcommand("run", "Evaluate a wrapper on a document");
    run_cmd->add_option("wrapper", run.wrapper, "Wrapper file (.rpn, .hel, .vhel, .elog)")->required();
    run_cmd->add_option("document", run.document, "Document file")->required();
    run_cmd->add_option("--out", run.out, "Output mode: json, atoms or dot")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutMode>{{"json", OutMode::json}, {"atoms", OutMode::atoms}, {"dot", OutMode::dot}}));
    run_cmd->add_flag("--strict,!--lenient", run.strict, "Condition paths must be single-valued (default)");
    run_cmd->add_flag("--cut", run.cut, "Honour '!' cut markers");

    std::string translate_src;
    Target target = Target::elog;
    auto* tr_cmd = app.add_subcommand("translate", "Translate a wrapper to vhel or elog");
    tr_cmd->add_option("wrapper", translate_src, "Wrapper file")->required();
    tr_cmd->add_option("--to", target, "Target language: vhel or elog")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Target>{{"vhel", Target::vhel}, {"elog", Target::elog}}))
        ->required();

    std::string check_src;
    auto* check_cmd = app.add_subcommand("check", "Parse and validate a wrapper");
    check_cmd->add_option("wrapper", check_src, "Wrapper file")->required();

    DiffConfig diff;
    std::string diff_doc;
    auto* diff_cmd = app.add_subcommand("diff", "Compare two wrappers on a document or on generated documents");
    diff_cmd->add_option("a", diff.a, "First wrapper")->required();
    diff_cmd->add_option("b", diff.b, "Second wrapper")->required();
    auto* doc_opt = diff_cmd->add_option("--document,-d", diff_doc, "Document file");
    auto* gen_opt = diff_cmd->add_option("--generate", diff.generate, "Number of generated documents");
    doc_opt->excludes(gen_opt);
    diff_cmd->add_option("--seed", diff.seed, "Seed of the first generated document");
    diff_cmd->add_option("--max-nodes", diff.max_nodes, "Size bound of generated documents");
    diff_cmd->add_flag("--strict,!--lenient", diff.strict, "Condition paths must be single-valued (default)");

    std::size_t m = 1, n = 1;
    auto* bench_cmd = app.add_subcommand("bench", "Quadratic fixpoint family: b-chain of length m over n leaves");
    bench_cmd->add_option("m", m, "Chain length")->required();
    bench_cmd->add_option("n", n, "Leaf count")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage_error;
    }

    if (*run_cmd)
        return emit(cmd_run(run), color);
    if (*tr_cmd)
        return emit(cmd_translate(translate_src, target), color);
    if (*check_cmd)
        return emit(cmd_check(check_src), color);
    if (*diff_cmd) {
        if (*doc_opt)
            diff.document = diff_doc;
        else if (!*gen_opt)
            return emit({usage_error, "", "diff: give --document or --generate\n"}, color);
        return emit(cmd_diff(diff), color);
    }
    return emit(cmd_bench(m, n), color);
}
