#include <string>
#include <vector>

#include "kahler/cli.hpp"

int main(int argc, char** argv) {
  return kahler::cli::execute(std::vector<std::string>(argv, argv + argc));
}
