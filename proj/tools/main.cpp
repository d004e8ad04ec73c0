#include "cli.hpp"

int main(int argc, char** argv) { return specpert::cli::run(argc, argv); }
