// polyrw: command-line analyses of polygraph files.
#include <iostream>

#include "CLI11.hpp"
#include "polyrw/cli.hpp"

int main(int argc, char** argv) {
    polyrw::Command cmd;
    CLI::App app{"Rewriting analyses for 2- and 3-polygraphs"};
    app.require_subcommand(1);
    for (const auto& verb : polyrw::verbs()) {
        CLI::App* sub = app.add_subcommand(verb);
        sub->add_option("--poly", cmd.poly, "polygraph file")->required();
        sub->add_option("--cert", cmd.cert, "termination certificate (interpretation names)");
        sub->add_option("--interp", cmd.interp, "single interpretation file");
        sub->add_option("--cell", cmd.cell, "diagram or word to normalize");
        sub->add_option("--max-steps", cmd.max_steps, "normalization step limit")->capture_default_str();
        sub->add_option("--size-bound", cmd.size_bound, "largest hole filling, in slices")->capture_default_str();
        sub->add_option("--width-bound", cmd.width_bound, "widest cut of a hole filling")->capture_default_str();
        sub->add_option("--output", cmd.output, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
        sub->add_option("--candidates", cmd.candidates, "candidate generators (branching names)")->delimiter(',');
        sub->add_option("--target", cmd.target, "target generator; ~name reverses it");
        sub->add_option("--dvals", cmd.dvals, "3-cell values, e.g. alpha=1,beta=-1");
        sub->callback([&cmd, verb] { cmd.verb = verb; });
    }
    CLI11_PARSE(app, argc, argv);
    return polyrw::run(cmd, std::cout, std::cerr);
}
