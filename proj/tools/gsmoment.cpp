#include "gsmoment/cli.hpp"

int main(int argc, char** argv) { return gsm::cli::main(argc, argv); }
