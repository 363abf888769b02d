// Protocol-violation fixture: answers every request with a non-JSON line.
#include <iostream>
#include <string>

int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    std::cout << "this is not json\n" << std::flush;
  }
  return 0;
}
