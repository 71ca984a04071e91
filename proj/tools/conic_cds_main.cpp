#include "conic/cli.hpp"

int main(int argc, char** argv) { return conic::run_cli(argc, argv); }
