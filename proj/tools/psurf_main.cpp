#include "psurf/cli.hpp"

int main(int argc, char** argv) { return psurf::cli::run_cli(argc, argv); }
