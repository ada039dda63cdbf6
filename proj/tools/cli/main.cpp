#include "run_cli.hpp"

int main(int argc, char** argv) { return obd::cli::run_cli(argc, argv); }
