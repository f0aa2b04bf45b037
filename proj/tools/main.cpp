#include "schmidtfock/cli.hpp"

int main(int argc, char** argv) { return schmidtfock::cli::run(argc, argv); }
