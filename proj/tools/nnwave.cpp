#include <nnwave/cli.hpp>

int main(int argc, char** argv) { return nnwave::cli::run(argc, argv); }
