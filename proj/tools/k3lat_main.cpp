#include <k3lat/cli.hpp>

int main(int argc, char** argv) { return k3lat::cli_run(argc, argv); }
