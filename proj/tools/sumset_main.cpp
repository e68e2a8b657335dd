#include "sumset/cli.hpp"

int main(int argc, char** argv) { return sumset::run_cli(argc, argv); }
