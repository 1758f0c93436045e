#include "newsmech/app.hpp"

int main(int argc, char** argv) { return newsmech::cli_main(argc, argv); }
