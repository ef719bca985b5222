#pragma once

#include <string>
#include <vector>

namespace delcon::cli {

// Exit codes shared by all subcommands.
inline constexpr int exit_ok = 0;            // success / converged / feasible
inline constexpr int exit_negative = 1;      // not converged / diverged / infeasible
inline constexpr int exit_invalid_input = 2; // bad arguments or scenario file
inline constexpr int exit_inconclusive = 3;  // feasibility cap hit undecided

// Subcommands: simulate | predict | bound | lmi-check | lmi-search | sweep |
// rendezvous. args excludes the program name.
int run_command(const std::vector<std::string>& args);

int run_command(int argc, char** argv);

}  // namespace delcon::cli
