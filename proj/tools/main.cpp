#include "glyphguide/commands.hpp"

int main(int argc, char** argv) { return glyphguide::run_cli(argc, argv); }
