#include <nhskin/cli.hpp>

int main(int argc, char** argv) { return nhskin::run_cli(argc, argv); }
