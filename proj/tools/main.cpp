#include "lnayield/cli.hpp"

int main(int argc, char** argv) { return lnayield::cli_dispatch(argc, argv); }
