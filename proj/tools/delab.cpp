#include "delab/cli.hpp"

int main(int argc, char** argv) { return delab::run_cli(argc, argv); }
