#include "dipkit/cli.hpp"

int main(int argc, char** argv) { return dipkit::cli::run(argc, argv); }
