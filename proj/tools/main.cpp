#include "frechet_cli.hpp"

int main(int argc, char** argv) {
    return frechet::cli::run(argc, argv);
}
