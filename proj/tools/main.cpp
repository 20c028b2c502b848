#include "commands.hpp"

int main(int argc, char** argv) { return csvortex::app::run_command(argc, argv); }
