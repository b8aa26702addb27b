// Writes the bundled coefficient files into a directory.
#include <filesystem>
#include <iostream>

#include "corpus.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: sdes-corpus <directory>\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  try {
    std::filesystem::create_directories(dir);
    for (const auto& e : sdes::corpus::entries()) {
      const auto path = dir / (e.name + ".json");
      sdes::io::write_json(sdes::io::series_file(e.series, e.kind), path);
      std::cout << path.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "sdes-corpus: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
