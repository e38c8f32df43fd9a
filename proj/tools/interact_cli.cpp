#include <interact/cli/app.hpp>

int main(int argc, char** argv) { return interact::cli::run(argc, argv); }
