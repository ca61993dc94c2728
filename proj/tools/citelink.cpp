#include <iostream>

#include <citelink/pipeline.hpp>

int main(int argc, char **argv) { return citelink::run_cli(argc, argv, std::cout, std::cerr); }
