#include "gailpt/cli.hpp"

int main(int argc, char** argv) { return gailpt::cli_main(argc, argv); }
