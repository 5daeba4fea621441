#include "srcloc/cli.hpp"

int main(int argc, char** argv)
{
    return srcloc::cli::run(argc, argv);
}
