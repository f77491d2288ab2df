#include "ranklash/cli.hpp"

int main(int argc, char** argv) { return ranklash::cli::run_cli(argc, argv); }
