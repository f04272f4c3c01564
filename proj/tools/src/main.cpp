#include "thsmooth_cli/cli.hpp"

int main(int argc, char** argv) { return thsmooth::cli::run(argc, argv); }
