#include "mdpkit/cli.hpp"

int main(int argc, char** argv) { return mdpkit::run_cli(argc, argv); }
