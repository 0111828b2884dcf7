#include "subrad/io.hpp"

int main(int argc, char** argv) { return subrad::io::cli_main(argc, argv); }
