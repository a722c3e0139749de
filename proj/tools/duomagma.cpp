#include "duomagma/cli.hpp"

int main(int argc, char** argv) { return duomagma::run_cli(argc, argv); }
