#include "systolic/cli.hpp"

int main(int argc, char** argv) {
    return systolic::run(argc, argv);
}
