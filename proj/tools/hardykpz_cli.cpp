#include "hardykpz/cli.hpp"

int main(int argc, char **argv) { return hk::cli::run(argc, argv); }
