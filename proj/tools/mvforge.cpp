#include "mvforge/cli.hpp"

int main(int argc, char** argv) { return mvforge::cli::run(argc, argv); }
