#include "reciplab/cli.hpp"

int main(int argc, char** argv) { return reciplab::run_command(argc, argv); }
