#include "commands.hpp"

int main(int argc, char** argv) { return posikit::cli::run_cli(argc, argv); }
