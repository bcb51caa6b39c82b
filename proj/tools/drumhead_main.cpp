#include "drumhead/cli.hpp"

int main(int argc, char** argv) { return drumhead::cli::run(argc, argv); }
