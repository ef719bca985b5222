#include "delcon/cli.hpp"

int main(int argc, char** argv) { return delcon::cli::run_command(argc, argv); }
