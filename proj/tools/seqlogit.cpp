#include "seqlogit/cli.hpp"

int main(int argc, char** argv) { return seqlogit::run_cli(argc, argv); }
