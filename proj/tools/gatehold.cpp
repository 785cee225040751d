#include "gatehold/cli.hpp"

int main(int argc, char** argv) { return gatehold::dispatch(argc, argv); }
