#include "knotforge/cli.hpp"

int main(int argc, char** argv) { return knotforge::cli::run(argc, argv); }
