#include "binomix/cli.hpp"

int main(int argc, char** argv) { return binomix::run_cli(argc, argv); }
