#include "cli.hpp"

int main(int argc, char** argv) { return qlh::cli::run(argc, argv); }
