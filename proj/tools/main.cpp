#include "owqc/cli.hpp"

int main(int argc, char** argv) { return owqc::cli::run(argc, argv); }
