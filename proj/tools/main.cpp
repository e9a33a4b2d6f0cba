#include "fairbound/cli.hpp"

int main(int argc, char** argv) { return fairbound::cli::run_cli(argc, argv); }
