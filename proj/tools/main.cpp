#include "isobound/cli.hpp"

int main(int argc, char** argv) { return isobound::cli_main(argc, argv); }
