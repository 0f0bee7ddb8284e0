#include "regmdp/cli.hpp"

int main(int argc, char** argv) { return regmdp::cli::main(argc, argv); }
