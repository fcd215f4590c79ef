#include "mindev/cli.hpp"

int main(int argc, char** argv) { return mindev::run_cli(argc, argv); }
