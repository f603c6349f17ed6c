#include "gbb_cli/cli.hpp"

int main(int argc, char** argv) { return gbb::cli::run(argc, argv); }
