#include "cli.hpp"

int main(int argc, char** argv) { return rotorcut::cli::run(argc, argv); }
