#include "warpkit/cli.hpp"

int main(int argc, char** argv) { return warpkit::cli_main(argc, argv); }
