#include "cliffop/cli.hpp"

int main(int argc, char** argv) { return cliffop::cli_main(argc, argv); }
