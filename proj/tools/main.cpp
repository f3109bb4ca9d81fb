#include "hclab/cli.hpp"

int main(int argc, char** argv) { return hclab::cli::run(argc, argv); }
