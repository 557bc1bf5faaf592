#include <legpro/cli.hpp>

int main(int argc, char** argv) { return legpro::cli::run(argc, argv); }
