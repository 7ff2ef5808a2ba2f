#include "hydroradar/cli.hpp"

int main(int argc, char** argv) { return hydroradar::cli_dispatch(argc, argv); }
