#include "racforge/cli.hpp"

int main(int argc, char** argv) { return racforge::cli_main(argc, argv); }
