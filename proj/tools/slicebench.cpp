#include "slicebench/cli.hpp"

int main(int argc, char** argv) { return slicebench::run_command(argc, argv); }
