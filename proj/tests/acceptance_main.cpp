#include <iostream>

#include "acceptance.hpp"

int main() { return genfun::cli::run_acceptance(std::cout) ? 0 : 1; }
