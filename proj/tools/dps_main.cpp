#include "dps/cli.hpp"

int main(int argc, char** argv) { return dps::cli_main(argc, argv); }
