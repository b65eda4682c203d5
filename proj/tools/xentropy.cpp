#include "xentropy/cli.hpp"

int main(int argc, char** argv) { return xentropy::cli::run(argc, argv); }
