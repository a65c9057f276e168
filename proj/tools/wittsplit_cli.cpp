#include "wittsplit/catalog.hpp"

int main(int argc, char** argv) { return wittsplit::cli_main(argc, argv); }
