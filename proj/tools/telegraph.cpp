#include "telegraph/cli.hpp"

int main(int argc, char** argv) { return telegraph::run(argc, argv); }
