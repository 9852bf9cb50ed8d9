#include "inls/experiment.hpp"

int main(int argc, char** argv) {
    return inls::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
