#include <string>
#include <vector>

#include "mplab/cli.hpp"

int main(int argc, char** argv) {
    return mplab::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
