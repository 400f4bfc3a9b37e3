#include "shallow/cli.hpp"

int main(int argc, char** argv) { return shallow::cli::run(argc, argv); }
