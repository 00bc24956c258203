#include "qpbo/cli.hpp"

int main(int argc, char** argv) { return qpbo::run_cli(argc, argv); }
