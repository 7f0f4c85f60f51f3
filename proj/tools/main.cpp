#include "multcount/cli.hpp"

int main(int argc, char** argv) { return multcount::run_cli(argc, argv); }
