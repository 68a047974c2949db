#include "ginedge/cli.hpp"

int main(int argc, char** argv) { return ginedge::cli::main_entry(argc, argv); }
