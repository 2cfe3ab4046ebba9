#include <iostream>

#include "cli.hpp"
#include "mallows/errors.hpp"

int main(int argc, char** argv) {
  using namespace mallows;
  try {
    const auto spec = cli::parse_args(argc, argv);
    return cli::run(spec, std::cout, std::cerr);
  } catch (const cli::UsageError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
