#include "prothladder/cli.hpp"

int main(int argc, char** argv) { return prothladder::cli::run(argc, argv); }
