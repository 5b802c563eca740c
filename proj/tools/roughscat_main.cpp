#include "roughscat/cli_app.hpp"

int main(int argc, char** argv) { return roughscat::run_cli(argc, argv); }
