#include "sqham/cli.hpp"

int main(int argc, char** argv) { return sqham::cli::dispatch(argc, argv); }
