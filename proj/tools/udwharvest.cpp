#include "udw/cli.hpp"

int main(int argc, char** argv) { return udw::cli::parse_and_dispatch(argc, argv); }
