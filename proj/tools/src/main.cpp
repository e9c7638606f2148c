#include "misreport/cli/cli.hpp"

int main(int argc, char** argv) { return misreport::cli::run_cli(argc, argv); }
