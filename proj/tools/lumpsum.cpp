#include "lumpsum/cli.hpp"

int main(int argc, char** argv) { return lumpsum::cli_main(argc, argv); }
