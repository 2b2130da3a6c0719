#include "nsc/cli.hpp"

int main(int argc, char** argv) { return nsc::cli::run(argc, argv); }
