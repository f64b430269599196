#include "rotent/cli.hpp"

int main(int argc, char** argv) { return rotent::cli::run(argc, argv); }
