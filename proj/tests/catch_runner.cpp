// Catch2 amalgamated implementation translation unit.
#include <catch2/catch_amalgamated.cpp>
