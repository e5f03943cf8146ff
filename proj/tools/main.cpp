#include "cli.hpp"

int main(int argc, char** argv) { return flagrig::run_cli(argc, argv); }
