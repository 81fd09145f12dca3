#include "cli.hpp"

int main(int argc, char** argv) { return pml::cli::dispatch(argc, argv); }
