#include "sigma/cli.hpp"

int main(int argc, char** argv) { return sigma::cli::run(argc, argv); }
