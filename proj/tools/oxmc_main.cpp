#include "oxmc/cli.hpp"

int main(int argc, char** argv) { return oxmc::cli::run(argc, argv); }
