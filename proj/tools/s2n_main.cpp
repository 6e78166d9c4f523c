#include "s2n/cli.hpp"

int main(int argc, char** argv) { return s2n::cli::run(argc, argv); }
