#include "corrclust/cli.hpp"

int main(int argc, char** argv) { return corrclust::cli::run_cli(argc, argv); }
