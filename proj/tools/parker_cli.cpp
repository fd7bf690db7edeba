#include <iostream>

#include "parker/config.hpp"
#include "parker/error.hpp"

int main(int argc, char** argv) {
  std::optional<parker::RunConfig> cfg;
  try {
    cfg = parker::parse_config(argc, argv);
  } catch (const parker::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (!cfg) return 0;
  return parker::run(*cfg);
}
