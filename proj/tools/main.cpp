#include "run.hpp"

int main(int argc, char** argv) { return ri1d::cli::main_entry(argc, argv); }
