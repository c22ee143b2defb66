#include "lgrg/cli.hpp"

int main(int argc, char** argv) { return lgrg::cli::run(argc, argv); }
