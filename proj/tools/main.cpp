#include "sicta/cli.hpp"

int main(int argc, char** argv)
{
    return sicta::run_cli(argc, argv);
}
