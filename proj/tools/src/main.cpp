// Command-line front end. All real work happens in driver.hpp; this file only
// maps flags onto driver options and forwards the exit code.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "minicheck/driver.hpp"

namespace mc = minicheck;

int main(int argc, char** argv) {
    CLI::App app{"minicheck: static checks for a small C dialect"};
    app.require_subcommand(1);

    mc::driver::CheckOptions copt;
    std::string profile_arg = "strict";
    std::string effectless_arg = "directive";
    std::string format_arg = "text";

    CLI::App* check = app.add_subcommand("check", "analyze source files and report findings");
    check->add_option("files", copt.files, "C source files to analyze")->required()->expected(-1);
    check->add_option("-D,--define", copt.defines, "predefine a macro (NAME or NAME=VALUE)")
        ->expected(1)
        ->allow_extra_args(false);
    check->add_option("-I,--include-dir", copt.include_paths, "directory searched for quoted includes")
        ->expected(1)
        ->allow_extra_args(false);
    check->add_option("--profile", profile_arg, "verdict profile")
        ->check(CLI::IsMember({"strict", "heuristic"}));
    check->add_option("--effectless", effectless_arg, "effectless-code engine mode")
        ->check(CLI::IsMember({"directive", "strict-r2-2", "off"}));
    check->add_option("--enable", copt.enabled, "run only the named checks (repeatable)")
        ->expected(1)
        ->allow_extra_args(false);
    check->add_option("--disable", copt.disabled, "skip the named checks (repeatable)")
        ->expected(1)
        ->allow_extra_args(false);
    check->add_option("--coverage", copt.coverage_file, "coverage record file (S/B lines)");
    check->add_option("--ledger", copt.ledger_file, "deviation ledger used to suppress findings");
    check->add_option("--annotations", copt.annotations_file, "entry-point annotation file");
    check->add_option("--format", format_arg, "output format")
        ->check(CLI::IsMember({"text", "ndjson"}));
    check->add_flag("--dump-cfg", copt.dump_cfg, "print per-function control flow graphs before findings");

    mc::driver::ProgramOptions popt;
    CLI::App* run = app.add_subcommand("run", "execute one translation unit in the reference interpreter");
    run->add_option("file", popt.file, "C source file to execute")->required();
    run->add_option("-D,--define", popt.defines, "predefine a macro (NAME or NAME=VALUE)")
        ->expected(1)
        ->allow_extra_args(false);
    run->add_option("-I,--include-dir", popt.include_paths, "directory searched for quoted includes")
        ->expected(1)
        ->allow_extra_args(false);
    run->add_option("--entry", popt.entry, "entry function (default main)");
    run->add_option("--args", popt.args, "integer arguments for the entry function, comma separated")
        ->delimiter(',')
        ->expected(1)
        ->allow_extra_args(false);
    run->add_option("--fuel", popt.fuel, "statement budget before the run is cut off");

    CLI::App* registry = app.add_subcommand("registry", "print the guideline registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : mc::driver::exit_usage;
    }

    if (*check) {
        copt.profile = profile_arg == "heuristic" ? mc::checks::Profile::Heuristic
                                                  : mc::checks::Profile::Strict;
        if (effectless_arg == "off") {
            copt.effectless_mode = mc::effectless::ReportMode::Off;
        } else if (effectless_arg == "strict-r2-2") {
            copt.effectless_mode = mc::effectless::ReportMode::StrictR22;
        } else {
            copt.effectless_mode = mc::effectless::ReportMode::Directive;
        }
        copt.format = format_arg == "ndjson" ? mc::driver::OutputFormat::Ndjson
                                             : mc::driver::OutputFormat::Text;
        return mc::driver::run_check(copt, std::cout, std::cerr);
    }
    if (*run) {
        return mc::driver::run_program(popt, std::cout, std::cerr);
    }
    if (*registry) {
        return mc::driver::run_registry(std::cout);
    }
    return mc::driver::exit_usage;
}
