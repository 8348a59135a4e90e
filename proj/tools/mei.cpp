#include "mei/cli.hpp"

int main(int argc, char** argv) { return mei::run_cli(argc, argv); }
