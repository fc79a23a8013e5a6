#include "roughvol/cli.hpp"

int main(int argc, char** argv) { return roughvol::dispatch(argc, argv); }
