#include "disambig/cli.hpp"

int main(int argc, char** argv) { return disambig::run_cli(argc, argv); }
