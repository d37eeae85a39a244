#include "cli.hpp"

int main(int argc, char** argv) { return epenc::cli::cli_main(argc, argv); }
