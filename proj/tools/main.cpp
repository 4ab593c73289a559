#include "cli.hpp"

int main(int argc, char** argv) {
    return mrsne::cli_main(argc, argv);
}
