#include "cli.hpp"

int main(int argc, char** argv) {
    return bijclique::cli::run(argc, argv, std::cout, std::cerr);
}
